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

#include "bqc/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bqc/errors.hpp"

namespace bqc {

std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::H:
      return "H";
    case GateKind::Rx:
      return "RX";
    case GateKind::Rz:
      return "RZ";
    case GateKind::CZ:
      return "CZ";
  }
  return "?";
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1) throw SizeError("circuit needs at least one qubit");
}

Circuit::Circuit(int n_qubits, std::vector<Gate> gates) : Circuit(n_qubits) {
  gates_.reserve(gates.size());
  for (const Gate& g : gates) push_back(g);
}

void Circuit::validate(const Gate& g) const {
  for (int i = 0; i < g.arity(); ++i) {
    if (g.qubits[i] < 0 || g.qubits[i] >= n_qubits_) {
      throw IndexError("gate qubit " + std::to_string(g.qubits[i]) + " out of range for " +
                       std::to_string(n_qubits_) + " qubits");
    }
  }
  if (g.kind == GateKind::CZ && g.qubits[0] == g.qubits[1]) {
    throw ContractError("CZ qubits must be distinct");
  }
  if (g.is_rotation()) {
    if (g.slot.has_value() == g.angle.has_value()) {
      throw ContractError("rotation must carry exactly one of slot or angle");
    }
  } else if (g.slot || g.angle) {
    throw ContractError(std::string(to_string(g.kind)) + " takes no parameter");
  }
}

void Circuit::push_back(const Gate& gate) {
  validate(gate);
  Gate g = gate;
  if (g.arity() == 1) g.qubits[1] = g.qubits[0];
  if (g.slot) n_params_ = std::max(n_params_, *g.slot + 1);
  gates_.push_back(g);
}

bool Circuit::is_bound() const noexcept {
  return std::none_of(gates_.begin(), gates_.end(), [](const Gate& g) { return g.slot.has_value(); });
}

bool Circuit::has_unique_slots() const {
  std::vector<int> seen(n_params_, 0);
  for (const Gate& g : gates_) {
    if (g.slot && ++seen[*g.slot] > 1) return false;
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

Circuit build_ansatz(int n_qubits, int depth) {
  if (depth < 0) throw ContractError("ansatz depth must be >= 0");
  Circuit c(n_qubits);
  std::size_t slot = 0;
  auto rotation_layer = [&] {
    for (int q = 0; q < n_qubits; ++q) c.push_back(Gate::rx(q, slot++));
    for (int q = 0; q < n_qubits; ++q) c.push_back(Gate::rz(q, slot++));
  };
  for (int q = 0; q < n_qubits; ++q) c.push_back(Gate::h(q));
  for (int layer = 0; layer < depth; ++layer) {
    rotation_layer();
    for (int q = 0; q + 1 < n_qubits; ++q) c.push_back(Gate::cz(q, q + 1));
  }
  rotation_layer();
  return c;
}

Circuit bind_parameters(const Circuit& circuit, std::span<const double> theta) {
  if (theta.size() != circuit.num_params()) {
    throw ContractError("theta has length " + std::to_string(theta.size()) + ", circuit expects " +
                        std::to_string(circuit.num_params()));
  }
  Circuit out(circuit.num_qubits());
  for (const Gate& g : circuit.gates()) {
    if (g.slot) {
      const double a = theta[*g.slot];
      out.push_back(g.kind == GateKind::Rx ? Gate::rx_fixed(g.qubits[0], a) : Gate::rz_fixed(g.qubits[0], a));
    } else {
      out.push_back(g);
    }
  }
  return out;
}

Circuit prune_zero_rotations(const Circuit& circuit, std::span<const double> theta) {
  if (theta.size() != circuit.num_params()) {
    throw ContractError("theta has length " + std::to_string(theta.size()) + ", circuit expects " +
                        std::to_string(circuit.num_params()));
  }
  Circuit out(circuit.num_qubits());
  for (const Gate& g : circuit.gates()) {
    if (!g.is_rotation()) {
      out.push_back(g);
      continue;
    }
    const double a = g.slot ? theta[*g.slot] : *g.angle;
    if (a == 0.0) continue;
    out.push_back(g.kind == GateKind::Rx ? Gate::rx_fixed(g.qubits[0], a)
                                         : Gate::rz_fixed(g.qubits[0], a));
  }
  return out;
}

namespace {

bool same_cz(const Gate& a, const Gate& b) {
  return b.kind == GateKind::CZ &&
         std::minmax(a.qubits[0], a.qubits[1]) == std::minmax(b.qubits[0], b.qubits[1]);
}

}  // namespace

Circuit cancel_cz_pairs(const Circuit& circuit) {
  if (!circuit.is_bound()) throw ContractError("CZ cancellation needs a bound circuit");
  std::vector<Gate> gates = circuit.gates();
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < gates.size() && !changed; ++i) {
      const Gate& first = gates[i];
      if (first.kind != GateKind::CZ) continue;
      for (std::size_t j = i + 1; j < gates.size(); ++j) {
        const Gate& g = gates[j];
        if (same_cz(first, g)) {
          gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(j));
          gates.erase(gates.begin() + static_cast<std::ptrdiff_t>(i));
          changed = true;
          break;
        }
        if (g.kind == GateKind::CZ) continue;
        if (g.acts_on(first.qubits[0]) || g.acts_on(first.qubits[1])) break;
      }
    }
  }
  return Circuit(circuit.num_qubits(), std::move(gates));
}

Circuit compile(const Circuit& circuit, std::span<const double> theta) {
  return cancel_cz_pairs(prune_zero_rotations(circuit, theta));
}

GateCounts gate_counts(const Circuit& circuit) {
  GateCounts n;
  for (const Gate& g : circuit.gates()) {
    switch (g.kind) {
      case GateKind::H:
        ++n.h;
        break;
      case GateKind::Rx:
        ++n.rx;
        break;
      case GateKind::Rz:
        ++n.rz;
        break;
      case GateKind::CZ:
        ++n.cz;
        break;
    }
  }
  return n;
}

std::string format_angle(double angle) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", angle);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

void write_circuit(std::ostream& os, const Circuit& circuit) {
  os << "QUBITS " << circuit.num_qubits() << '\n';
  for (const Gate& g : circuit.gates()) {
    os << to_string(g.kind) << ' ' << g.qubits[0];
    if (g.kind == GateKind::CZ) {
      os << ' ' << g.qubits[1];
    } else if (g.slot) {
      os << ' ' << *g.slot;
    } else if (g.angle) {
      os << ' ' << format_angle(*g.angle);
    }
    os << '\n';
  }
}

namespace {

template <class T>
T parse_number(const std::string& tok, std::size_t line) {
  T value{};
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw IngestionError("line " + std::to_string(line) + ": cannot parse '" + tok + "'");
  }
  return value;
}

double parse_angle(const std::string& tok, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used == tok.size()) return v;
  } catch (const std::exception&) {
  }
  throw IngestionError("line " + std::to_string(line) + ": cannot parse angle '" + tok + "'");
}

}  // namespace

Circuit read_circuit(std::istream& is) {
  std::optional<int> declared;
  std::vector<Gate> gates;
  int max_qubit = -1;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    std::string op = tok[0];
    std::transform(op.begin(), op.end(), op.begin(), [](unsigned char ch) { return std::toupper(ch); });
    auto expect = [&](std::size_t n) {
      if (tok.size() != n) {
        throw IngestionError("line " + std::to_string(line_no) + ": " + op + " expects " +
                             std::to_string(n - 1) + " operand(s)");
      }
    };
    if (op == "QUBITS") {
      expect(2);
      declared = parse_number<int>(tok[1], line_no);
      continue;
    }
    Gate g;
    if (op == "H") {
      expect(2);
      g = Gate::h(parse_number<int>(tok[1], line_no));
    } else if (op == "CZ") {
      expect(3);
      g = Gate::cz(parse_number<int>(tok[1], line_no), parse_number<int>(tok[2], line_no));
    } else if (op == "RX" || op == "RZ") {
      expect(3);
      const int q = parse_number<int>(tok[1], line_no);
      const bool is_slot = tok[2].find_first_not_of("0123456789") == std::string::npos;
      const GateKind kind = op == "RX" ? GateKind::Rx : GateKind::Rz;
      if (is_slot) {
        g = {kind, {q, q}, parse_number<std::size_t>(tok[2], line_no), std::nullopt};
      } else {
        g = {kind, {q, q}, std::nullopt, parse_angle(tok[2], line_no)};
      }
    } else {
      throw IngestionError("line " + std::to_string(line_no) + ": unknown gate '" + tok[0] + "'");
    }
    for (int i = 0; i < g.arity(); ++i) {
      if (g.qubits[i] < 0) throw IngestionError("line " + std::to_string(line_no) + ": negative qubit");
      max_qubit = std::max(max_qubit, g.qubits[i]);
    }
    gates.push_back(g);
  }
  const int n = declared.value_or(max_qubit + 1);
  if (n < 1) throw IngestionError("circuit file declares no qubits");
  try {
    return Circuit(n, std::move(gates));
  } catch (const std::exception& e) {
    throw IngestionError(std::string("invalid circuit: ") + e.what());
  }
}

}  // namespace bqc
