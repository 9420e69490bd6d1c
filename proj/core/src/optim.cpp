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

#include "bqc/optim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "bqc/random.hpp"

namespace bqc {

namespace {

void check_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw ContractError(std::string(what) + ": length " + std::to_string(b.size()) + " != " +
                        std::to_string(a.size()));
  }
}

}  // namespace

double stepsize(std::size_t t, const StepSchedule& s) {
  if (t < 1) throw ContractError("stepsize is defined for t >= 1");
  return s.a * std::pow(static_cast<double>(t) + s.b, -s.exponent);
}

GradVector log_prior_gradient(const Prior& prior, std::span<const double> theta) {
  if (std::holds_alternative<UniformPrior>(prior)) return GradVector(theta.size(), 0.0);
  if (const auto* lap = std::get_if<LaplacePrior>(&prior)) {
    if (!(lap->alpha >= 0.0) || !std::isfinite(lap->alpha)) {
      throw ContractError("Laplace alpha must be finite and >= 0");
    }
    GradVector g(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
      if (theta[k] == 0.0) {
        throw ContractError("Laplace log-prior gradient is undefined at theta_" + std::to_string(k) +
                            " = 0; use proximal gradient ascent");
      }
      g[k] = theta[k] > 0.0 ? -lap->alpha : lap->alpha;
    }
    return g;
  }
  const auto& custom = std::get<CustomPrior>(prior);
  if (!custom.log_density_gradient) throw ContractError("custom prior has no gradient function");
  GradVector g = custom.log_density_gradient(theta);
  check_same_length(theta, g, "custom prior gradient");
  return g;
}

ParamVector ga_step(std::span<const double> theta, std::span<const double> grad_cost,
                    std::span<const double> grad_log_prior, double eps, double beta) {
  check_same_length(theta, grad_cost, "cost gradient");
  ParamVector out(theta.begin(), theta.end());
  if (!std::isinf(beta)) {
    check_same_length(theta, grad_log_prior, "log-prior gradient");
    const double scale = eps / beta;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += scale * grad_log_prior[k];
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= eps * grad_cost[k];
  return out;
}

ParamVector soft_threshold(std::span<const double> theta, double upsilon) {
  if (!(upsilon >= 0.0)) throw ContractError("soft-threshold level must be >= 0");
  ParamVector out(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const double v = theta[k];
    if (v > upsilon) {
      out[k] = v - upsilon;
    } else if (v < -upsilon) {
      out[k] = v + upsilon;
    } else {
      out[k] = 0.0;
    }
  }
  return out;
}

namespace {

double kth_smallest_magnitude(std::span<const double> x, std::size_t k) {
  std::vector<double> mag(x.size());
  std::transform(x.begin(), x.end(), mag.begin(), [](double v) { return std::abs(v); });
  auto nth = mag.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(mag.begin(), nth, mag.end());
  return *nth;
}

void check_k0(std::size_t k0, std::size_t k, double eps) {
  if (k0 > k) throw ContractError("K0 = " + std::to_string(k0) + " exceeds K = " + std::to_string(k));
  if (!(eps > 0.0)) throw ContractError("stepsize must be positive");
}

}  // namespace

double adaptive_alpha(std::span<const double> theta_half, double eps, std::size_t k0) {
  check_k0(k0, theta_half.size(), eps);
  if (k0 == 0) return 0.0;
  return kth_smallest_magnitude(theta_half, k0) / eps;
}

PgaStepResult pga_step(std::span<const double> theta, std::span<const double> grad_cost, double eps,
                       std::size_t k0) {
  check_same_length(theta, grad_cost, "cost gradient");
  check_k0(k0, theta.size(), eps);
  ParamVector half(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) half[k] = theta[k] - eps * grad_cost[k];

  PgaStepResult r;
  // The threshold alpha_t * eps_t is the K0-th magnitude itself; it is used
  // directly because (m / eps) * eps need not round back to m.
  const double upsilon = k0 == 0 ? 0.0 : kth_smallest_magnitude(half, k0);
  r.alpha = upsilon / eps;
  r.theta = soft_threshold(half, upsilon);
  r.tie = std::count(r.theta.begin(), r.theta.end(), 0.0) > static_cast<std::ptrdiff_t>(k0);
  return r;
}

ParamVector sgld_step(std::span<const double> theta, std::span<const double> grad_cost,
                      std::span<const double> grad_log_prior, double eps, double beta,
                      NoiseStream noise) {
  if (!(beta > 0.0) || std::isinf(beta)) throw ContractError("SGLD needs a finite beta > 0");
  ParamVector out = ga_step(theta, grad_cost, grad_log_prior, eps, beta);
  const double scale = std::sqrt(2.0 * eps / beta);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] += scale * counter_normal(noise.seed, noise.iteration, k);
  }
  return out;
}

TrainingTrace run_training(const Objective& objective, ParamVector theta0, const TrainConfig& config) {
  const std::size_t k_params = objective.num_params();
  if (theta0.size() != k_params) {
    throw ContractError("theta0 has length " + std::to_string(theta0.size()) + ", objective expects " +
                        std::to_string(k_params));
  }
  if (config.algorithm == Algorithm::PGA && config.k0 > k_params) {
    throw ContractError("K0 exceeds the number of parameters");
  }
  if (!(config.beta > 0.0)) throw ContractError("beta must be positive");

  const auto start = std::chrono::steady_clock::now();
  TrainingTrace trace(k_params, config.spill_cap, config.spill_path);
  trace.meta = {config.algorithm, config.beta, config.k0, config.seed, 0.0};

  const bool prior_active = !std::isinf(config.beta) && !std::holds_alternative<UniformPrior>(config.prior);
  const std::uint64_t noise_seed = derive_seed(config.seed, {0x5617D});

  ParamVector theta = std::move(theta0);
  trace.append({0, objective.exact_cost(theta), 0.0, 0.0, theta});

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    try {
      const double eps = stepsize(t, config.schedule);
      const GradVector grad = objective.gradient(theta, t);
      double alpha = 0.0;
      switch (config.algorithm) {
        case Algorithm::PGA: {
          auto step = pga_step(theta, grad, eps, config.k0);
          theta = std::move(step.theta);
          alpha = step.alpha;
          if (step.tie) trace.record_tie(t);
          break;
        }
        case Algorithm::SGLD:
          if (!std::isinf(config.beta)) {
            const GradVector prior = prior_active ? log_prior_gradient(config.prior, theta)
                                                  : GradVector(k_params, 0.0);
            theta = sgld_step(theta, grad, prior, eps, config.beta, {noise_seed, t});
            break;
          }
          [[fallthrough]];
        case Algorithm::GA: {
          const GradVector prior = prior_active ? log_prior_gradient(config.prior, theta)
                                                : GradVector(k_params, 0.0);
          theta = ga_step(theta, grad, prior, eps, config.beta);
          break;
        }
      }
      trace.append({t, objective.exact_cost(theta), eps, alpha, theta});
    } catch (const ContractError& e) {
      throw ContractError("iteration " + std::to_string(t) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("iteration " + std::to_string(t) + ": " + e.what());
    }
  }
  trace.meta.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return trace;
}

}  // namespace bqc
