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
#include <functional>
#include <limits>
#include <span>
#include <type_traits>
#include <variant>
#include <vector>

#include "bqc/errors.hpp"
#include "bqc/gradient.hpp"
#include "bqc/trace.hpp"

namespace bqc {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

struct UniformPrior {};
struct LaplacePrior {
  double alpha = 0.0;
};
struct CustomPrior {
  std::function<GradVector(std::span<const double>)> log_density_gradient;
};
using Prior = std::variant<UniformPrior, LaplacePrior, CustomPrior>;

// eps_t = a (t + b)^(-exponent), exponent 1/3 by default.
struct StepSchedule {
  double a = 15.0;
  double b = 10.0;
  double exponent = 1.0 / 3.0;

  static StepSchedule constant(double eps) { return {eps, 0.0, 0.0}; }
};

double stepsize(std::size_t t, const StepSchedule& schedule);

struct TrainConfig {
  Algorithm algorithm = Algorithm::GA;
  // Inverse temperature; infinity drops the prior term (GA) and the noise
  // (SGLD degenerates to GA). Ignored by PGA.
  double beta = kInfiniteBeta;
  StepSchedule schedule;
  std::size_t iterations = 1000;
  // Number of parameters PGA holds at exactly zero.
  std::size_t k0 = 0;
  std::uint64_t seed = 0;
  Prior prior = UniformPrior{};
  std::size_t spill_cap = std::size_t{1} << 26;
  std::filesystem::path spill_path;
};

// Uniform: 0. Laplace: -alpha sign(theta); undefined at exact zeros, which
// raises ContractError (use PGA for sparse training).
GradVector log_prior_gradient(const Prior& prior, std::span<const double> theta);

// theta + eps beta^-1 grad_log_prior - eps grad_cost.
ParamVector ga_step(std::span<const double> theta, std::span<const double> grad_cost,
                    std::span<const double> grad_log_prior, double eps, double beta);

// l1 proximal operator with inclusive zero band |theta| <= upsilon.
ParamVector soft_threshold(std::span<const double> theta, double upsilon);

// alpha_t = m_(K0) / eps with m_(K0) the K0-th smallest |theta_half|; zero
// when K0 = 0.
double adaptive_alpha(std::span<const double> theta_half, double eps, std::size_t k0);

struct PgaStepResult {
  ParamVector theta;
  double alpha = 0.0;
  // More than K0 components fell on the threshold.
  bool tie = false;
};

PgaStepResult pga_step(std::span<const double> theta, std::span<const double> grad_cost, double eps,
                       std::size_t k0);

// Counter-based Gaussian noise source; component k at this iteration draws
// counter_normal(seed, iteration, k).
struct NoiseStream {
  std::uint64_t seed = 0;
  std::uint64_t iteration = 0;
};

// ga_step plus sqrt(2 eps / beta) xi, xi ~ N(0, I). Requires finite beta > 0.
ParamVector sgld_step(std::span<const double> theta, std::span<const double> grad_cost,
                      std::span<const double> grad_log_prior, double eps, double beta,
                      NoiseStream noise);

// Runs config.iterations steps from theta0 and records every iterate with its
// exact cost. Errors are rethrown with the failing iteration in the message.
TrainingTrace run_training(const Objective& objective, ParamVector theta0, const TrainConfig& config);

// Mean of f(theta_t) over rows t >= burn_in. f may return a double or a
// std::vector<double> (averaged component-wise).
template <class F>
auto ergodic_average(const TrainingTrace& trace, std::size_t burn_in, F&& f) {
  using R = std::decay_t<std::invoke_result_t<F&, std::span<const double>>>;
  if (burn_in >= trace.size()) {
    throw ContractError("burn-in " + std::to_string(burn_in) + " leaves no samples out of " +
                        std::to_string(trace.size()));
  }
  R acc{};
  std::size_t n = 0;
  trace.for_each([&](const TraceRow& row) {
    if (row.iter < burn_in) return;
    R v = f(std::span<const double>(row.theta));
    if constexpr (std::is_arithmetic_v<R>) {
      acc += v;
    } else {
      if (n == 0) acc.assign(v.size(), 0.0);
      if (v.size() != acc.size()) throw ContractError("ergodic average: inconsistent value sizes");
      for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
    }
    ++n;
  });
  if constexpr (std::is_arithmetic_v<R>) {
    return acc / static_cast<double>(n);
  } else {
    for (auto& a : acc) a /= static_cast<double>(n);
    return acc;
  }
}

}  // namespace bqc
