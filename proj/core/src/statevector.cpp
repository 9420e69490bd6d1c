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

#include "bqc/statevector.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "bqc/errors.hpp"

namespace bqc {

namespace {

constexpr double kNormTol = 1e-10;

void check_qubit(int q, int n) {
  if (q < 0 || q >= n) {
    throw IndexError("qubit index " + std::to_string(q) + " out of range for " +
                     std::to_string(n) + " qubits");
  }
}

}  // namespace

StateVector::StateVector(int n_qubits, int max_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > max_qubits) {
    throw SizeError("n_qubits must be in [1, " + std::to_string(max_qubits) + "], got " +
                    std::to_string(n_qubits));
  }
  amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t n = amplitudes.size();
  if (n < 2 || !std::has_single_bit(n)) {
    throw ContractError("amplitude count must be a power of two >= 2");
  }
  StateVector s;
  s.n_qubits_ = std::countr_zero(n);
  s.amps_ = std::move(amplitudes);
  if (std::abs(s.norm_squared() - 1.0) > kNormTol) {
    throw ContractError("amplitudes are not normalised");
  }
  return s;
}

double StateVector::norm_squared() const noexcept {
  double acc = 0.0;
  for (const auto& a : amps_) acc += std::norm(a);
  return acc;
}

std::size_t StateVector::stride(int q) const {
  check_qubit(q, n_qubits_);
  return std::size_t{1} << (n_qubits_ - 1 - q);
}

void StateVector::apply_h(int q) {
  const std::size_t s = stride(q);
  const double r = std::numbers::sqrt2 / 2.0;
  for (std::size_t base = 0; base < amps_.size(); base += 2 * s) {
    for (std::size_t j = base; j < base + s; ++j) {
      const Complex a = amps_[j];
      const Complex b = amps_[j + s];
      amps_[j] = r * (a + b);
      amps_[j + s] = r * (a - b);
    }
  }
}

void StateVector::apply_rx(int q, double theta) {
  const std::size_t s = stride(q);
  const double c = std::cos(theta / 2.0);
  const Complex mis{0.0, -std::sin(theta / 2.0)};
  for (std::size_t base = 0; base < amps_.size(); base += 2 * s) {
    for (std::size_t j = base; j < base + s; ++j) {
      const Complex a = amps_[j];
      const Complex b = amps_[j + s];
      amps_[j] = c * a + mis * b;
      amps_[j + s] = mis * a + c * b;
    }
  }
}

void StateVector::apply_rz(int q, double theta) {
  const std::size_t s = stride(q);
  const Complex lo = std::polar(1.0, -theta / 2.0);
  const Complex hi = std::polar(1.0, theta / 2.0);
  for (std::size_t base = 0; base < amps_.size(); base += 2 * s) {
    for (std::size_t j = base; j < base + s; ++j) {
      amps_[j] *= lo;
      amps_[j + s] *= hi;
    }
  }
}

void StateVector::apply_cz(int a, int b) {
  const std::size_t sa = stride(a);
  const std::size_t sb = stride(b);
  if (a == b) throw ContractError("CZ requires two distinct qubits");
  const std::size_t mask = sa | sb;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & mask) == mask) amps_[i] = -amps_[i];
  }
}

StateVector init_zero_state(int n_qubits) { return StateVector(n_qubits); }

void apply_gate(StateVector& state, const Gate& gate, std::optional<double> angle) {
  if (gate.is_rotation() != angle.has_value()) {
    throw ContractError(std::string(to_string(gate.kind)) +
                        (gate.is_rotation() ? " requires an angle" : " takes no angle"));
  }
  switch (gate.kind) {
    case GateKind::H:
      state.apply_h(gate.qubits[0]);
      break;
    case GateKind::Rx:
      state.apply_rx(gate.qubits[0], *angle);
      break;
    case GateKind::Rz:
      state.apply_rz(gate.qubits[0], *angle);
      break;
    case GateKind::CZ:
      state.apply_cz(gate.qubits[0], gate.qubits[1]);
      break;
  }
}

StateVector run_circuit(const Circuit& circuit, std::span<const double> theta) {
  if (circuit.num_params() > theta.size()) {
    throw ContractError("circuit references slot " + std::to_string(circuit.num_params() - 1) +
                        " but theta has length " + std::to_string(theta.size()));
  }
  StateVector state(circuit.num_qubits());
  for (const Gate& g : circuit.gates()) {
    std::optional<double> angle;
    if (g.slot) {
      angle = theta[*g.slot];
    } else if (g.angle) {
      angle = *g.angle;
    }
    apply_gate(state, g, angle);
  }
  return state;
}

ProbDist::ProbDist(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ContractError("empty probability vector");
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ContractError("probabilities must be finite and nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kNormTol) {
    throw ContractError("probabilities sum to " + std::to_string(total));
  }
}

ProbDist born_probabilities(const StateVector& state) {
  std::vector<double> p(state.dim());
  const auto amps = state.amplitudes();
  for (std::size_t z = 0; z < p.size(); ++z) p[z] = std::norm(amps[z]);
  return ProbDist(std::move(p));
}

ShotCounts sample_counts(const ProbDist& dist, std::uint64_t n_shots, std::uint64_t seed) {
  if (n_shots < 1) throw ContractError("n_shots must be >= 1");
  if (dist.size() == 0) throw ContractError("cannot sample from an empty distribution");
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::uint64_t> pick(dist.probs().begin(), dist.probs().end());
  ShotCounts out;
  out.n_shots = n_shots;
  out.n_outcomes = dist.size();
  for (std::uint64_t s = 0; s < n_shots; ++s) ++out.counts[pick(rng)];
  return out;
}

ProbDist empirical_distribution(const ShotCounts& shots) {
  if (shots.n_shots == 0 || shots.n_outcomes == 0) {
    throw ContractError("empty shot record");
  }
  std::vector<double> p(shots.n_outcomes, 0.0);
  for (const auto& [z, c] : shots.counts) {
    if (z >= shots.n_outcomes) throw IndexError("shot outcome out of range");
    p[z] = static_cast<double>(c) / static_cast<double>(shots.n_shots);
  }
  return ProbDist(std::move(p));
}

double expectation_diagonal(const ProbDist& dist, const std::function<double(std::uint64_t)>& f) {
  double acc = 0.0;
  for (std::size_t z = 0; z < dist.size(); ++z) {
    if (dist[z] != 0.0) acc += dist[z] * f(z);
  }
  return acc;
}

double expectation_tfim(const StateVector& state, double g) {
  const int n = state.num_qubits();
  if (n < 2) throw ContractError("TFIM expectation needs at least 2 qubits");
  const auto amps = state.amplitudes();
  const std::size_t dim = amps.size();

  double zz = 0.0;
  for (std::size_t z = 0; z < dim; ++z) {
    const double p = std::norm(amps[z]);
    if (p == 0.0) continue;
    // Adjacent qubits are adjacent bits; count equal-neighbour pairs.
    const std::size_t diff = (z ^ (z >> 1)) & ((std::size_t{1} << (n - 1)) - 1);
    const int unequal = std::popcount(diff);
    zz += p * static_cast<double>((n - 1) - 2 * unequal);
  }

  double x = 0.0;
  for (int q = 0; q < n; ++q) {
    const std::size_t s = std::size_t{1} << (n - 1 - q);
    for (std::size_t z = 0; z < dim; ++z) {
      if (z & s) continue;
      x += 2.0 * (std::conj(amps[z]) * amps[z | s]).real();
    }
  }
  return -zz - g * x;
}

}  // namespace bqc
