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

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace bqc {

enum class GateKind { H, Rx, Rz, CZ };

std::string_view to_string(GateKind kind) noexcept;

// One gate of a circuit. Rotations reference either a parameter slot (the
// trainable form) or a fixed angle (the bound form produced by compilation);
// H and CZ carry neither.
struct Gate {
  GateKind kind = GateKind::H;
  std::array<int, 2> qubits{0, 0};
  std::optional<std::size_t> slot;
  std::optional<double> angle;

  static Gate h(int q) { return {GateKind::H, {q, q}, std::nullopt, std::nullopt}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}, std::nullopt, std::nullopt}; }
  static Gate rx(int q, std::size_t slot) { return {GateKind::Rx, {q, q}, slot, std::nullopt}; }
  static Gate rz(int q, std::size_t slot) { return {GateKind::Rz, {q, q}, slot, std::nullopt}; }
  static Gate rx_fixed(int q, double a) { return {GateKind::Rx, {q, q}, std::nullopt, a}; }
  static Gate rz_fixed(int q, double a) { return {GateKind::Rz, {q, q}, std::nullopt, a}; }

  bool is_rotation() const noexcept { return kind == GateKind::Rx || kind == GateKind::Rz; }
  int arity() const noexcept { return kind == GateKind::CZ ? 2 : 1; }
  bool acts_on(int q) const noexcept {
    return qubits[0] == q || (arity() == 2 && qubits[1] == q);
  }

  friend bool operator==(const Gate&, const Gate&) = default;
};

// Ordered gate list on a fixed register. num_params() is one past the
// largest referenced slot; bound circuits have none.
class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int n_qubits);
  Circuit(int n_qubits, std::vector<Gate> gates);

  void push_back(const Gate& gate);

  int num_qubits() const noexcept { return n_qubits_; }
  std::size_t num_params() const noexcept { return n_params_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  bool is_bound() const noexcept;
  // True when the referenced slots are exactly {0, ..., K-1}, each once.
  bool has_unique_slots() const;

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  void validate(const Gate& gate) const;

  int n_qubits_ = 0;
  std::size_t n_params_ = 0;
  std::vector<Gate> gates_;
};

}  // namespace bqc
