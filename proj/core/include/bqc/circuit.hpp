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

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>

#include "bqc/gate.hpp"

namespace bqc {

struct GateCounts {
  std::size_t cz = 0;
  std::size_t rx = 0;
  std::size_t rz = 0;
  std::size_t h = 0;

  std::size_t rotations() const noexcept { return rx + rz; }
  std::size_t total() const noexcept { return cz + rx + rz + h; }
  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

// Hardware-efficient layered ansatz:
//   H on every qubit,
//   `depth` blocks of [Rx on every qubit, Rz on every qubit, CZ(i, i+1) chain],
//   a closing [Rx on every qubit, Rz on every qubit].
// Slots are assigned in gate order, so K = 2 * n_qubits * (depth + 1).
Circuit build_ansatz(int n_qubits, int depth);

// Substitutes theta for every slot; the result has no parameter slots.
Circuit bind_parameters(const Circuit& circuit, std::span<const double> theta);

// Binds theta into the circuit and drops every rotation whose angle is
// exactly 0.0. The result has no parameter slots.
Circuit prune_zero_rotations(const Circuit& circuit, std::span<const double> theta);

// Removes pairs of identical CZ gates until no pair remains. Two CZs on the
// same (unordered) pair cancel when every gate between them is either another
// CZ (all CZs are diagonal and commute) or does not touch either qubit.
Circuit cancel_cz_pairs(const Circuit& circuit);

// prune_zero_rotations followed by cancel_cz_pairs.
Circuit compile(const Circuit& circuit, std::span<const double> theta);

GateCounts gate_counts(const Circuit& circuit);

// Line format, one gate per line:
//   QUBITS n        (optional header; otherwise inferred from the gates)
//   H q
//   RX q slot|angle
//   RZ q slot|angle
//   CZ q1 q2
// A bare integer operand is a slot; angles always carry a '.' or exponent.
// Blank lines and '#' comments are ignored.
void write_circuit(std::ostream& os, const Circuit& circuit);
Circuit read_circuit(std::istream& is);

std::string format_angle(double angle);

}  // namespace bqc
