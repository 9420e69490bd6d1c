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

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "bqc/gate.hpp"

namespace bqc {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;

// Dense N-qubit state. Qubit 0 is the most significant bit of the basis
// index, so index z reads as the measured bitstring left to right.
class StateVector {
 public:
  // |0...0> on n_qubits; throws SizeError outside [1, max_qubits].
  explicit StateVector(int n_qubits, int max_qubits = kMaxQubits);

  // Takes the amplitudes as given; throws ContractError if the length is not
  // a power of two or the norm deviates from 1 by more than 1e-10.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  int num_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  double norm_squared() const noexcept;

  void apply_h(int q);
  void apply_rx(int q, double theta);
  void apply_rz(int q, double theta);
  void apply_cz(int a, int b);

 private:
  StateVector() = default;
  std::size_t stride(int q) const;

  int n_qubits_ = 0;
  std::vector<Complex> amps_;
};

StateVector init_zero_state(int n_qubits);

// Applies a single gate in place. `angle` must be present exactly when the
// gate is a rotation; the gate's own slot/angle fields are ignored here.
void apply_gate(StateVector& state, const Gate& gate, std::optional<double> angle = std::nullopt);

// U(theta)|0...0>. Slots index into theta, fixed angles are used verbatim.
StateVector run_circuit(const Circuit& circuit, std::span<const double> theta);

class ProbDist {
 public:
  ProbDist() = default;
  // Throws ContractError on negative entries or |sum - 1| > 1e-10.
  explicit ProbDist(std::vector<double> probs);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t z) const { return probs_[z]; }
  std::span<const double> probs() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

ProbDist born_probabilities(const StateVector& state);

struct ShotCounts {
  std::map<std::uint64_t, std::uint64_t> counts;
  std::uint64_t n_shots = 0;
  std::size_t n_outcomes = 0;

  std::uint64_t count(std::uint64_t z) const {
    auto it = counts.find(z);
    return it == counts.end() ? 0 : it->second;
  }
};

ShotCounts sample_counts(const ProbDist& dist, std::uint64_t n_shots, std::uint64_t seed);

// Normalised histogram of a shot record.
ProbDist empirical_distribution(const ShotCounts& shots);

double expectation_diagonal(const ProbDist& dist, const std::function<double(std::uint64_t)>& f);

// <H> for H = -sum_i Z_i Z_{i+1} - g sum_i X_i on an open chain.
double expectation_tfim(const StateVector& state, double g);

}  // namespace bqc
