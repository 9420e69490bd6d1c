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

#include <atomic>
#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "bqc/circuit.hpp"
#include "bqc/costs.hpp"
#include "bqc/statevector.hpp"

namespace bqc {

using ParamVector = std::vector<double>;
using GradVector = std::vector<double>;

// Differentiable scalar objective over a parameter vector. `stream`
// addresses the randomness of stochastic estimators: calls with equal
// (theta, stream) return identical values.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t num_params() const = 0;
  virtual double cost(std::span<const double> theta, std::uint64_t stream = 0) const = 0;
  virtual GradVector gradient(std::span<const double> theta, std::uint64_t stream = 0) const = 0;

  // Noise-free cost, used for trace recording.
  virtual double exact_cost(std::span<const double> theta) const { return cost(theta, 0); }
  virtual bool is_exact() const { return true; }
};

// Objective defined by plain callables; used for synthetic problems.
class FunctionObjective final : public Objective {
 public:
  using ValueFn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<GradVector(std::span<const double>)>;

  FunctionObjective(std::size_t n_params, ValueFn value, GradFn grad = {});

  std::size_t num_params() const override { return n_params_; }
  double cost(std::span<const double> theta, std::uint64_t stream = 0) const override;
  // Falls back to central differences when no analytic gradient is given.
  GradVector gradient(std::span<const double> theta, std::uint64_t stream = 0) const override;

 private:
  std::size_t n_params_;
  ValueFn value_;
  GradFn grad_;
};

struct ExactMode {};
struct ShotMode {
  std::uint64_t n_shots = 1000;
  std::uint64_t seed = 0;
};
using EvalMode = std::variant<ExactMode, ShotMode>;

struct MaxCutProblem {
  WeightedGraph graph;
};
struct TfimProblem {
  double g = 1.0;
};
struct MmdProblem {
  EmpiricalDist data;
  KernelSpec kernel;
};
using CostKind = std::variant<MaxCutProblem, TfimProblem, MmdProblem>;

// A problem cost attached to a parameterised circuit.
//
// Exact mode evaluates the full statevector. Shot mode estimates the cost
// from sampled bitstrings:
//   max-cut  mean of -S(z) over computational-basis shots;
//   TFIM     ZZ terms from computational-basis shots, X terms from shots
//            after a Hadamard on every qubit (n_shots each);
//   MMD      U-statistic over model shots for E_pp'[k], plain sample mean
//            for the cross term, exact data term.
// All three estimators are unbiased for the exact cost.
class CostEvaluator final : public Objective {
 public:
  CostEvaluator(Circuit circuit, CostKind kind, EvalMode mode = ExactMode{});
  CostEvaluator(const CostEvaluator& other);
  CostEvaluator(CostEvaluator&& other) noexcept;
  CostEvaluator& operator=(const CostEvaluator&) = delete;

  std::size_t num_params() const override { return circuit_.num_params(); }
  double cost(std::span<const double> theta, std::uint64_t stream = 0) const override;
  double exact_cost(std::span<const double> theta) const override;
  GradVector gradient(std::span<const double> theta, std::uint64_t stream = 0) const override;
  bool is_exact() const override { return std::holds_alternative<ExactMode>(mode_); }

  StateVector state(std::span<const double> theta) const;
  ProbDist distribution(std::span<const double> theta) const;
  double cost_of_state(const StateVector& state) const;

  const Circuit& circuit() const noexcept { return circuit_; }
  const CostKind& kind() const noexcept { return kind_; }
  const EvalMode& mode() const noexcept { return mode_; }

  // Number of circuit simulations performed so far.
  std::uint64_t circuit_evaluations() const noexcept { return evals_.load(); }

  friend GradVector parameter_shift_gradient(const CostEvaluator&, std::span<const double>,
                                             std::uint64_t);

 private:
  double shot_cost(const StateVector& state, std::uint64_t seed) const;
  double mmd_exact(const ProbDist& p) const;
  // (K (p - nu))_z, the MMD gradient weights at p.
  std::vector<double> mmd_residual_kernel(const ProbDist& p) const;

  Circuit circuit_;
  CostKind kind_;
  EvalMode mode_;
  std::vector<double> kernel_gap_;
  mutable std::atomic<std::uint64_t> evals_{0};
};

// [grad C]_k = (C(theta + pi/2 e_k) - C(theta - pi/2 e_k)) / 2 for max-cut
// and TFIM. The MMD is quadratic in p, so its gradient is assembled from the
// shifted Born vectors: with dp_k = (p+ - p-) / 2,
//   dC/dtheta_k = 2 dp_k^T K p - 2 dp_k^T K nu.
// Linear costs take 2K circuit simulations; the MMD takes one more for the
// unshifted p. Shot-mode MMD gradients are not supported.
GradVector parameter_shift_gradient(const CostEvaluator& evaluator, std::span<const double> theta,
                                    std::uint64_t stream = 0);

// Central differences; exact objectives only.
GradVector finite_difference_gradient(const Objective& objective, std::span<const double> theta,
                                      double h = 1e-5);

}  // namespace bqc
