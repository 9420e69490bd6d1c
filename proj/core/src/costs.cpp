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

#include "bqc/costs.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "bqc/circuit.hpp"
#include "bqc/errors.hpp"

namespace bqc {

WeightedGraph::WeightedGraph(int n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes) {
  if (n_nodes < 2) throw ContractError("graph needs at least 2 nodes");
  std::set<std::pair<int, int>> seen;
  for (Edge e : edges) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (e.i < 0 || e.j >= n_nodes) {
      throw IndexError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) +
                       ") out of range");
    }
    if (e.i == e.j) throw ContractError("self-loop on node " + std::to_string(e.i));
    if (!std::isfinite(e.weight)) throw ContractError("edge weight must be finite");
    if (!seen.emplace(e.i, e.j).second) {
      throw ContractError("duplicate edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
    }
    edges_.push_back(e);
  }
}

std::vector<int> WeightedGraph::degrees() const {
  std::vector<int> d(static_cast<std::size_t>(n_nodes_), 0);
  for (const Edge& e : edges_) {
    ++d[static_cast<std::size_t>(e.i)];
    ++d[static_cast<std::size_t>(e.j)];
  }
  return d;
}

WeightedGraph read_graph(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> bool {
    while (std::getline(is, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next()) throw IngestionError("graph file is empty");
  int n = 0;
  {
    std::istringstream ls(line);
    std::string rest;
    if (!(ls >> n) || (ls >> rest)) throw IngestionError("line 1: expected node count");
  }
  std::vector<Edge> edges;
  while (next()) {
    std::istringstream ls(line);
    Edge e;
    std::string rest;
    if (!(ls >> e.i >> e.j >> e.weight) || (ls >> rest)) {
      throw IngestionError("line " + std::to_string(line_no) + ": expected 'i j w'");
    }
    edges.push_back(e);
  }
  try {
    return WeightedGraph(n, std::move(edges));
  } catch (const std::exception& e) {
    throw IngestionError(std::string("invalid graph: ") + e.what());
  }
}

void write_graph(std::ostream& os, const WeightedGraph& graph) {
  os << graph.num_nodes() << '\n';
  for (const Edge& e : graph.edges()) {
    os << e.i << ' ' << e.j << ' ' << format_angle(e.weight) << '\n';
  }
}

std::string encode_int(std::uint64_t z, int n_bits) {
  if (n_bits < 1 || n_bits > 63 || z >= (std::uint64_t{1} << n_bits)) {
    throw ContractError("value " + std::to_string(z) + " does not fit in " + std::to_string(n_bits) +
                        " bits");
  }
  std::string s(static_cast<std::size_t>(n_bits), '0');
  for (int b = 0; b < n_bits; ++b) {
    if ((z >> (n_bits - 1 - b)) & 1U) s[static_cast<std::size_t>(b)] = '1';
  }
  return s;
}

std::uint64_t decode_int(std::string_view bits) {
  if (bits.empty() || bits.size() > 63) throw ContractError("bitstring length must be in [1, 63]");
  std::uint64_t z = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ContractError("bitstring contains non-binary character");
    z = (z << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return z;
}

double cut_value(const WeightedGraph& graph, std::uint64_t z) {
  const int n = graph.num_nodes() - 1;
  if (z >> n) throw ContractError("labelling index out of range");
  auto label = [&](int node) -> unsigned {
    return node == 0 ? 0U : static_cast<unsigned>((z >> (n - node)) & 1U);
  };
  double s = 0.0;
  for (const Edge& e : graph.edges()) {
    if (label(e.i) != label(e.j)) s += e.weight;
  }
  return s;
}

double cut_value(const WeightedGraph& graph, std::string_view bits) {
  if (static_cast<int>(bits.size()) != graph.num_nodes() - 1) {
    throw ContractError("bitstring length " + std::to_string(bits.size()) + " != n_nodes - 1 = " +
                        std::to_string(graph.num_nodes() - 1));
  }
  return cut_value(graph, decode_int(bits));
}

double maxcut_cost(const WeightedGraph& graph, const ProbDist& dist) {
  const std::size_t expected = std::size_t{1} << (graph.num_nodes() - 1);
  if (dist.size() != expected) {
    throw ContractError("distribution has " + std::to_string(dist.size()) + " outcomes, graph needs " +
                        std::to_string(expected));
  }
  double acc = 0.0;
  for (std::size_t z = 0; z < dist.size(); ++z) {
    if (dist[z] != 0.0) acc += dist[z] * cut_value(graph, static_cast<std::uint64_t>(z));
  }
  return -acc;
}

CutSolution maxcut_optimum(const WeightedGraph& graph) {
  const int n = graph.num_nodes() - 1;
  if (graph.num_nodes() > 20) throw SizeError("maxcut_optimum supports at most 20 nodes");
  std::uint64_t best_z = 0;
  double best = cut_value(graph, std::uint64_t{0});
  for (std::uint64_t z = 1; z < (std::uint64_t{1} << n); ++z) {
    const double v = cut_value(graph, z);
    if (v > best) {
      best = v;
      best_z = z;
    }
  }
  return {encode_int(best_z, n), best};
}

double tfim_cost(const StateVector& state, double g) { return expectation_tfim(state, g); }

double tfim_ground_energy(int n_qubits, double g) {
  if (n_qubits < 2) throw ContractError("TFIM needs at least 2 qubits");
  if (n_qubits > 12) throw SizeError("tfim_ground_energy supports at most 12 qubits");
  const std::size_t dim = std::size_t{1} << n_qubits;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  const std::size_t chain_mask = (std::size_t{1} << (n_qubits - 1)) - 1;
  for (std::size_t z = 0; z < dim; ++z) {
    const int unequal = std::popcount((z ^ (z >> 1)) & chain_mask);
    const auto zi = static_cast<Eigen::Index>(z);
    h(zi, zi) = -static_cast<double>((n_qubits - 1) - 2 * unequal);
    for (int q = 0; q < n_qubits; ++q) {
      h(static_cast<Eigen::Index>(z ^ (std::size_t{1} << q)), zi) -= g;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

double gaussian_kernel(std::int64_t z, std::int64_t zp, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ContractError("kernel bandwidth must be positive");
  const double d = static_cast<double>(z - zp);
  return std::exp(-d * d / (2.0 * sigma * sigma));
}

double median_heuristic(std::span<const std::int64_t> data) {
  if (data.size() < 2) throw ContractError("median heuristic needs at least 2 data points");
  std::vector<std::int64_t> gaps;
  gaps.reserve(data.size() * (data.size() - 1) / 2);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = i + 1; j < data.size(); ++j) {
      gaps.push_back(data[i] > data[j] ? data[i] - data[j] : data[j] - data[i]);
    }
  }
  const auto mid = gaps.begin() + static_cast<std::ptrdiff_t>((gaps.size() - 1) / 2);
  std::nth_element(gaps.begin(), mid, gaps.end());
  if (*mid == 0) throw ContractError("degenerate bandwidth: median pairwise distance is zero");
  return static_cast<double>(*mid);
}

EmpiricalDist make_empirical(std::span<const std::int64_t> samples, int n_qubits) {
  if (samples.empty()) throw ContractError("dataset is empty");
  if (n_qubits < 1 || n_qubits > kMaxQubits) throw SizeError("n_qubits out of range");
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::vector<double> counts(dim, 0.0);
  for (std::int64_t y : samples) {
    if (y < 0 || static_cast<std::uint64_t>(y) >= dim) {
      throw ContractError("value " + std::to_string(y) + " outside [0, " + std::to_string(dim) + ")");
    }
    counts[static_cast<std::size_t>(y)] += 1.0;
  }
  const auto total = static_cast<double>(samples.size());
  for (double& c : counts) c /= total;
  return {ProbDist(std::move(counts)), samples.size(), {samples.begin(), samples.end()}};
}

double mmd_cost(const ProbDist& model, const ProbDist& data, const KernelSpec& kernel) {
  if (model.size() != data.size()) throw ContractError("model and data outcome spaces differ");
  const std::size_t n = model.size();
  // k(z, z') depends only on |z - z'|.
  std::vector<double> k_of_gap(n);
  for (std::size_t d = 0; d < n; ++d) {
    k_of_gap[d] = gaussian_kernel(static_cast<std::int64_t>(d), 0, kernel.bandwidth);
  }
  // Expanded form pp - 2 pn + nn equals d^T K d with d = p - nu; the latter
  // cancels exactly when the distributions agree.
  std::vector<double> d(n);
  for (std::size_t z = 0; z < n; ++z) d[z] = model[z] - data[z];
  double acc = 0.0;
  for (std::size_t z = 0; z < n; ++z) {
    if (d[z] == 0.0) continue;
    double row = 0.0;
    for (std::size_t w = 0; w < n; ++w) row += k_of_gap[z > w ? z - w : w - z] * d[w];
    acc += d[z] * row;
  }
  return acc;
}

double total_variation(const ProbDist& p, const ProbDist& q) {
  if (p.size() != q.size()) throw ContractError("distributions have different lengths");
  double acc = 0.0;
  for (std::size_t z = 0; z < p.size(); ++z) acc += std::abs(p[z] - q[z]);
  return 0.5 * acc;
}

}  // namespace bqc
