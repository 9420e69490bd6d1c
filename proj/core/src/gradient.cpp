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

#include "bqc/gradient.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "bqc/errors.hpp"
#include "bqc/random.hpp"

namespace bqc {

namespace {

constexpr std::uint64_t kCostTag = 0xC057;
constexpr std::uint64_t kShiftTag = 0x5A1F7;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_theta(std::span<const double> theta, std::size_t k) {
  if (theta.size() != k) {
    throw ContractError("theta has length " + std::to_string(theta.size()) + ", expected " +
                        std::to_string(k));
  }
}

// Spin sum over adjacent pairs: sum_i s_i s_{i+1} for outcome z.
double zz_value(std::uint64_t z, int n) {
  const std::uint64_t mask = (std::uint64_t{1} << (n - 1)) - 1;
  const int unequal = std::popcount((z ^ (z >> 1)) & mask);
  return static_cast<double>((n - 1) - 2 * unequal);
}

double x_value(std::uint64_t z, int n) {
  return static_cast<double>(n - 2 * std::popcount(z));
}

}  // namespace

FunctionObjective::FunctionObjective(std::size_t n_params, ValueFn value, GradFn grad)
    : n_params_(n_params), value_(std::move(value)), grad_(std::move(grad)) {
  if (!value_) throw ContractError("FunctionObjective needs a value function");
}

double FunctionObjective::cost(std::span<const double> theta, std::uint64_t) const {
  check_theta(theta, n_params_);
  return value_(theta);
}

GradVector FunctionObjective::gradient(std::span<const double> theta, std::uint64_t) const {
  check_theta(theta, n_params_);
  if (grad_) return grad_(theta);
  return finite_difference_gradient(*this, theta);
}

CostEvaluator::CostEvaluator(Circuit circuit, CostKind kind, EvalMode mode)
    : circuit_(std::move(circuit)), kind_(std::move(kind)), mode_(mode) {
  if (!circuit_.has_unique_slots()) {
    throw ContractError("parameter-shift evaluation needs each slot used exactly once");
  }
  const int n = circuit_.num_qubits();
  const std::size_t dim = std::size_t{1} << n;
  std::visit(overloaded{
                 [&](const MaxCutProblem& p) {
                   if (p.graph.num_nodes() - 1 != n) {
                     throw ContractError("max-cut on " + std::to_string(p.graph.num_nodes()) +
                                         " nodes needs " + std::to_string(p.graph.num_nodes() - 1) +
                                         " qubits, circuit has " + std::to_string(n));
                   }
                 },
                 [&](const TfimProblem&) {
                   if (n < 2) throw ContractError("TFIM needs at least 2 qubits");
                 },
                 [&](const MmdProblem& p) {
                   if (p.data.size() != dim) {
                     throw ContractError("dataset outcome space does not match the circuit");
                   }
                   kernel_gap_.resize(dim);
                   for (std::size_t d = 0; d < dim; ++d) {
                     kernel_gap_[d] = gaussian_kernel(static_cast<std::int64_t>(d), 0, p.kernel.bandwidth);
                   }
                 },
             },
             kind_);
  if (const auto* shots = std::get_if<ShotMode>(&mode_); shots && shots->n_shots < 1) {
    throw ContractError("shot mode needs n_shots >= 1");
  }
}

CostEvaluator::CostEvaluator(const CostEvaluator& other)
    : circuit_(other.circuit_),
      kind_(other.kind_),
      mode_(other.mode_),
      kernel_gap_(other.kernel_gap_),
      evals_(other.evals_.load()) {}

CostEvaluator::CostEvaluator(CostEvaluator&& other) noexcept
    : circuit_(std::move(other.circuit_)),
      kind_(std::move(other.kind_)),
      mode_(other.mode_),
      kernel_gap_(std::move(other.kernel_gap_)),
      evals_(other.evals_.load()) {}

StateVector CostEvaluator::state(std::span<const double> theta) const {
  check_theta(theta, num_params());
  evals_.fetch_add(1, std::memory_order_relaxed);
  return run_circuit(circuit_, theta);
}

ProbDist CostEvaluator::distribution(std::span<const double> theta) const {
  return born_probabilities(state(theta));
}

std::vector<double> CostEvaluator::mmd_residual_kernel(const ProbDist& p) const {
  const auto& nu = std::get<MmdProblem>(kind_).data.dist;
  const std::size_t n = p.size();
  std::vector<double> d(n);
  for (std::size_t z = 0; z < n; ++z) d[z] = p[z] - nu[z];
  std::vector<double> kd(n, 0.0);
  for (std::size_t z = 0; z < n; ++z) {
    double row = 0.0;
    for (std::size_t w = 0; w < n; ++w) row += kernel_gap_[z > w ? z - w : w - z] * d[w];
    kd[z] = row;
  }
  return kd;
}

double CostEvaluator::mmd_exact(const ProbDist& p) const {
  const auto& nu = std::get<MmdProblem>(kind_).data.dist;
  const auto kd = mmd_residual_kernel(p);
  double acc = 0.0;
  for (std::size_t z = 0; z < p.size(); ++z) acc += (p[z] - nu[z]) * kd[z];
  return acc;
}

double CostEvaluator::cost_of_state(const StateVector& psi) const {
  return std::visit(overloaded{
                        [&](const MaxCutProblem& p) { return maxcut_cost(p.graph, born_probabilities(psi)); },
                        [&](const TfimProblem& p) { return expectation_tfim(psi, p.g); },
                        [&](const MmdProblem&) { return mmd_exact(born_probabilities(psi)); },
                    },
                    kind_);
}

double CostEvaluator::shot_cost(const StateVector& psi, std::uint64_t seed) const {
  const auto n_shots = std::get<ShotMode>(mode_).n_shots;
  const int n = psi.num_qubits();
  const auto shots_d = static_cast<double>(n_shots);
  return std::visit(
      overloaded{
          [&](const MaxCutProblem& p) {
            const auto shots = sample_counts(born_probabilities(psi), n_shots, seed);
            double acc = 0.0;
            for (const auto& [z, c] : shots.counts) acc += static_cast<double>(c) * cut_value(p.graph, z);
            return -acc / shots_d;
          },
          [&](const TfimProblem& p) {
            const auto z_shots = sample_counts(born_probabilities(psi), n_shots, derive_seed(seed, {0}));
            StateVector rotated = psi;
            for (int q = 0; q < n; ++q) rotated.apply_h(q);
            const auto x_shots = sample_counts(born_probabilities(rotated), n_shots, derive_seed(seed, {1}));
            double zz = 0.0, x = 0.0;
            for (const auto& [z, c] : z_shots.counts) zz += static_cast<double>(c) * zz_value(z, n);
            for (const auto& [z, c] : x_shots.counts) x += static_cast<double>(c) * x_value(z, n);
            return -(zz / shots_d) - p.g * (x / shots_d);
          },
          [&](const MmdProblem& p) {
            if (n_shots < 2) throw ContractError("shot-mode MMD needs n_shots >= 2");
            const auto& nu = p.data.dist;
            const auto shots = sample_counts(born_probabilities(psi), n_shots, seed);
            auto k = [&](std::uint64_t a, std::uint64_t b) { return kernel_gap_[a > b ? a - b : b - a]; };
            double model_pairs = 0.0;
            for (const auto& [a, ca] : shots.counts) {
              for (const auto& [b, cb] : shots.counts) {
                model_pairs += static_cast<double>(ca) * static_cast<double>(cb) * k(a, b);
              }
            }
            model_pairs -= shots_d;  // drop i == j terms, k(z, z) = 1
            const double model_term = model_pairs / (shots_d * (shots_d - 1.0));
            double cross = 0.0;
            for (const auto& [a, ca] : shots.counts) {
              double row = 0.0;
              for (std::size_t w = 0; w < nu.size(); ++w) {
                if (nu[w] != 0.0) row += nu[w] * k(a, w);
              }
              cross += static_cast<double>(ca) * row;
            }
            cross /= shots_d;
            double data_term = 0.0;
            for (std::size_t z = 0; z < nu.size(); ++z) {
              if (nu[z] == 0.0) continue;
              for (std::size_t w = 0; w < nu.size(); ++w) data_term += nu[z] * nu[w] * k(z, w);
            }
            return model_term - 2.0 * cross + data_term;
          },
      },
      kind_);
}

double CostEvaluator::cost(std::span<const double> theta, std::uint64_t stream) const {
  const StateVector psi = state(theta);
  if (const auto* shots = std::get_if<ShotMode>(&mode_)) {
    return shot_cost(psi, derive_seed(shots->seed, {kCostTag, stream}));
  }
  return cost_of_state(psi);
}

double CostEvaluator::exact_cost(std::span<const double> theta) const { return cost_of_state(state(theta)); }

GradVector CostEvaluator::gradient(std::span<const double> theta, std::uint64_t stream) const {
  return parameter_shift_gradient(*this, theta, stream);
}

GradVector parameter_shift_gradient(const CostEvaluator& ev, std::span<const double> theta,
                                    std::uint64_t stream) {
  const std::size_t k_params = ev.num_params();
  check_theta(theta, k_params);
  const double shift = std::numbers::pi / 2.0;
  const auto* shots = std::get_if<ShotMode>(&ev.mode_);
  const bool is_mmd = std::holds_alternative<MmdProblem>(ev.kind_);
  if (shots && is_mmd) throw ContractError("shot-mode MMD gradients are not supported");

  GradVector grad(k_params, 0.0);
  std::vector<double> weights;
  if (is_mmd) weights = ev.mmd_residual_kernel(ev.distribution(theta));

  // Walk the circuit once; each shifted circuit reuses the prefix state and
  // replays only the gates after the shifted rotation.
  const auto& gates = ev.circuit_.gates();
  StateVector prefix = init_zero_state(ev.circuit_.num_qubits());
  const auto angle_of = [&](const Gate& g) -> std::optional<double> {
    if (g.slot) return theta[*g.slot];
    return g.angle;
  };
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& gate = gates[i];
    if (gate.slot) {
      const std::size_t k = *gate.slot;
      StateVector shifted_states[2] = {prefix, prefix};
      for (int s = 0; s < 2; ++s) {
        StateVector& psi = shifted_states[s];
        apply_gate(psi, gate, theta[k] + (s == 0 ? shift : -shift));
        for (std::size_t j = i + 1; j < gates.size(); ++j) apply_gate(psi, gates[j], angle_of(gates[j]));
        ev.evals_.fetch_add(1, std::memory_order_relaxed);
      }
      if (is_mmd) {
        const auto plus = born_probabilities(shifted_states[0]);
        const auto minus = born_probabilities(shifted_states[1]);
        double acc = 0.0;
        for (std::size_t z = 0; z < weights.size(); ++z) acc += (plus[z] - minus[z]) * weights[z];
        // 2 * (1/2)(p+ - p-)^T K (p - nu)
        grad[k] = acc;
      } else {
        double c[2];
        for (int s = 0; s < 2; ++s) {
          c[s] = shots ? ev.shot_cost(shifted_states[s],
                                      derive_seed(shots->seed, {kShiftTag, stream, k, static_cast<std::uint64_t>(s)}))
                       : ev.cost_of_state(shifted_states[s]);
        }
        grad[k] = 0.5 * (c[0] - c[1]);
      }
    }
    apply_gate(prefix, gate, angle_of(gate));
  }
  return grad;
}

GradVector finite_difference_gradient(const Objective& objective, std::span<const double> theta,
                                      double h) {
  if (!objective.is_exact()) throw ContractError("finite differences need an exact objective");
  if (!(h > 0.0)) throw ContractError("finite-difference step must be positive");
  check_theta(theta, objective.num_params());
  GradVector grad(theta.size());
  ParamVector x(theta.begin(), theta.end());
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = theta[k] + h;
    const double up = objective.exact_cost(x);
    x[k] = theta[k] - h;
    const double down = objective.exact_cost(x);
    x[k] = theta[k];
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace bqc
