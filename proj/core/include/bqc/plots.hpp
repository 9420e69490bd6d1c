// Copyright 2026 The bayesqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bqc/experiment.hpp"

namespace bqc {

struct Series {
  std::string label;
  std::vector<double> y;
};

// Minimal standalone SVG charts.
std::string svg_line_plot(const std::string& title, const std::vector<Series>& series, bool log_y);
std::string svg_histogram(const std::string& title, const std::vector<std::uint64_t>& counts,
                          const std::vector<double>& reference, std::size_t lo, std::size_t hi);

// 10^3 samples (by default) from the result's model distribution, as used by
// the histogram plot.
ShotCounts generated_samples(const RunResult& result, std::uint64_t n_samples = 1000,
                             std::uint64_t seed = 0);

// Writes into output_dir:
//   cost.svg       median shifted cost vs iteration, log y;
//   histogram.svg  generated samples vs the data distribution (datasets only);
//   alpha.svg      alpha_t of the first seed (PGA only);
//   params.svg     two parameter paths of the first seed that cross zero most
//                  often (PGA only).
// Returns the paths written.
std::vector<std::filesystem::path> emit_plots(const RunResult& result, const std::filesystem::path& output_dir);

}  // namespace bqc
