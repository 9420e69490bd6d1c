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
#include <vector>

#include "bqc/costs.hpp"
#include "bqc/gradient.hpp"

namespace bqc {

// Uniform simple 3-regular graph by the pairing model with full rejection,
// edge weights i.i.d. Uniform[0, 1]. n_nodes must be even and >= 4.
WeightedGraph gen_3regular_weighted(int n_nodes, std::uint64_t seed);

// g ~ Normal(0, variance 1/4).
double sample_tfim_g(std::uint64_t seed);

// K i.i.d. draws from Uniform(-r, r), endpoints excluded.
ParamVector init_params(std::size_t k, double r, std::uint64_t seed);

// One integer per line; each value must lie in [0, 2^n_qubits). Errors name
// the offending line.
EmpiricalDist load_integer_dataset(const std::filesystem::path& path, int n_qubits);

double median(std::vector<double> values);

}  // namespace bqc
