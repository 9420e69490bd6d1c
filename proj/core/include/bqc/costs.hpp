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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bqc/statevector.hpp"

namespace bqc {

struct Edge {
  int i = 0;
  int j = 0;
  double weight = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Simple undirected weighted graph; edges are stored with i < j.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  WeightedGraph(int n_nodes, std::vector<Edge> edges);

  int num_nodes() const noexcept { return n_nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::vector<int> degrees() const;

 private:
  int n_nodes_ = 0;
  std::vector<Edge> edges_;
};

// Text format: first line n_nodes, then "i j w" per edge.
WeightedGraph read_graph(std::istream& is);
void write_graph(std::ostream& os, const WeightedGraph& graph);

// MSB-first binary expansion of z on n_bits characters.
std::string encode_int(std::uint64_t z, int n_bits);
std::uint64_t decode_int(std::string_view bits);

// Node 0 is fixed to label 0; node m (m >= 1) takes bit m-1 of the string.
double cut_value(const WeightedGraph& graph, std::string_view bits);
// Same, with the labelling given as an outcome index over n_nodes-1 qubits.
double cut_value(const WeightedGraph& graph, std::uint64_t z);

// -E_p[S(z)] over the 2^(n_nodes-1) labellings.
double maxcut_cost(const WeightedGraph& graph, const ProbDist& dist);

struct CutSolution {
  std::string bits;
  double value = 0.0;
};

// Exhaustive search for n_nodes <= 20, ties broken by smallest index.
CutSolution maxcut_optimum(const WeightedGraph& graph);

double tfim_cost(const StateVector& state, double g);

// Smallest eigenvalue of the dense chain Hamiltonian, n_qubits <= 12.
double tfim_ground_energy(int n_qubits, double g);

struct KernelSpec {
  double bandwidth = 1.0;
};

double gaussian_kernel(std::int64_t z, std::int64_t zp, double sigma);

// Lower median of the pairwise absolute differences.
double median_heuristic(std::span<const std::int64_t> data);

// Empirical distribution of an integer dataset over [0, 2^n_qubits).
struct EmpiricalDist {
  ProbDist dist;
  std::uint64_t source_size = 0;
  std::vector<std::int64_t> samples;

  std::size_t size() const noexcept { return dist.size(); }
};

EmpiricalDist make_empirical(std::span<const std::int64_t> samples, int n_qubits);

// Exact kernel MMD: E_pp'[k] - 2 E_p nu[k] + E_nu nu'[k].
double mmd_cost(const ProbDist& model, const ProbDist& data, const KernelSpec& kernel);
inline double mmd_cost(const ProbDist& model, const EmpiricalDist& data, const KernelSpec& kernel) {
  return mmd_cost(model, data.dist, kernel);
}

double total_variation(const ProbDist& p, const ProbDist& q);

}  // namespace bqc
