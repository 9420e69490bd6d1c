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

#include "bqc/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "bqc/errors.hpp"

namespace bqc {

WeightedGraph gen_3regular_weighted(int n_nodes, std::uint64_t seed) {
  if (n_nodes < 4 || n_nodes % 2 != 0) {
    throw ContractError("3-regular graphs need an even node count >= 4, got " + std::to_string(n_nodes));
  }
  std::mt19937_64 rng(seed);
  std::vector<int> points(static_cast<std::size_t>(3 * n_nodes));
  for (std::size_t p = 0; p < points.size(); ++p) points[p] = static_cast<int>(p / 3);

  std::set<std::pair<int, int>> pairs;
  for (;;) {
    std::shuffle(points.begin(), points.end(), rng);
    pairs.clear();
    bool simple = true;
    for (std::size_t p = 0; p < points.size() && simple; p += 2) {
      auto [a, b] = std::minmax(points[p], points[p + 1]);
      simple = a != b && pairs.emplace(a, b).second;
    }
    if (simple) break;
  }
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back({a, b, weight(rng)});
  return WeightedGraph(n_nodes, std::move(edges));
}

double sample_tfim_g(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.5);
  return g(rng);
}

ParamVector init_params(std::size_t k, double r, std::uint64_t seed) {
  if (k < 1) throw ContractError("init_params needs K >= 1");
  if (!(r > 0.0) || !std::isfinite(r)) throw ContractError("init radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  ParamVector theta(k);
  for (auto& v : theta) {
    do {
      v = u(rng);
    } while (v == -r);
  }
  return theta;
}

EmpiricalDist load_integer_dataset(const std::filesystem::path& path, int n_qubits) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open dataset " + path.string());
  if (n_qubits < 1 || n_qubits > 62) throw SizeError("dataset qubit count out of range");
  const auto limit = std::int64_t{1} << n_qubits;
  std::vector<std::int64_t> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* b = line.data() + first;
    const char* e = line.data() + last + 1;
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e) {
      throw IngestionError(path.string() + ":" + std::to_string(line_no) + ": not an integer: '" +
                           std::string(b, e) + "'");
    }
    if (v < 0 || v >= limit) {
      throw IngestionError(path.string() + ":" + std::to_string(line_no) + ": value " + std::to_string(v) +
                           " outside [0, " + std::to_string(limit) + ")");
    }
    values.push_back(v);
  }
  if (values.empty()) throw IngestionError("dataset " + path.string() + " is empty");
  return make_empirical(values, n_qubits);
}

double median(std::vector<double> values) {
  if (values.empty()) throw ContractError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace bqc
