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
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bqc {

enum class Algorithm { GA, PGA, SGLD };

std::string_view to_string(Algorithm algorithm) noexcept;

struct TraceRow {
  std::size_t iter = 0;
  double cost = 0.0;
  double epsilon = 0.0;
  double alpha = 0.0;
  std::vector<double> theta;

  std::size_t zero_count() const noexcept;
};

struct TraceMeta {
  Algorithm algorithm = Algorithm::GA;
  double beta = 0.0;
  std::size_t k0 = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
};

// Per-iteration training record. Row 0 holds theta_0 and its cost. Rows are
// kept in memory until rows * K exceeds `spill_cap` values; older rows are
// then appended to a CSV spill file and streamed back by for_each(). front()
// and back() stay in memory.
class TrainingTrace {
 public:
  explicit TrainingTrace(std::size_t n_params, std::size_t spill_cap = std::size_t{1} << 26,
                         std::filesystem::path spill_path = {});
  TrainingTrace(TrainingTrace&&) noexcept;
  TrainingTrace& operator=(TrainingTrace&&) noexcept;
  ~TrainingTrace();

  void append(TraceRow row);
  void record_tie(std::size_t iter) { ties_.push_back(iter); }

  std::size_t size() const noexcept { return spilled_ + rows_.size(); }
  bool empty() const noexcept { return size() == 0; }
  std::size_t num_params() const noexcept { return n_params_; }
  const TraceRow& back() const;
  const TraceRow& front() const;
  bool spilled() const noexcept { return spilled_ > 0; }

  // Visits every row in iteration order, reading spilled rows from disk.
  void for_each(const std::function<void(const TraceRow&)>& visit) const;
  std::vector<TraceRow> rows() const;

  const std::vector<std::size_t>& tie_iterations() const noexcept { return ties_; }
  TraceMeta meta;

  // Header iter,cost,epsilon,alpha,theta_0,...,theta_{K-1}; %.17g values.
  void write_csv(std::ostream& os) const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  struct SpillFile;

  std::size_t n_params_;
  std::size_t spill_cap_;
  std::filesystem::path spill_path_;
  std::vector<TraceRow> rows_;
  std::optional<TraceRow> first_;
  std::size_t spilled_ = 0;
  std::vector<std::size_t> ties_;
  std::unique_ptr<SpillFile> spill_;
};

std::string format_double(double value);
void write_trace_row(std::ostream& os, const TraceRow& row);
TraceRow parse_trace_row(const std::string& line, std::size_t n_params);

}  // namespace bqc
