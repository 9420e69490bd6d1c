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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "bqc/circuit.hpp"
#include "bqc/errors.hpp"
#include "bqc/gradient.hpp"
#include "bqc/optim.hpp"
#include "bqc/random.hpp"
#include "bqc/statevector.hpp"
#include "bqc/trace.hpp"

namespace {

using bqc::Algorithm;
using bqc::FunctionObjective;
using bqc::ParamVector;
using bqc::StepSchedule;
using bqc::TrainConfig;

FunctionObjective half_square(std::size_t k, double center = 0.0) {
  return FunctionObjective(
      k,
      [center](std::span<const double> t) {
        double s = 0.0;
        for (double x : t) s += 0.5 * (x - center) * (x - center);
        return s;
      },
      [center](std::span<const double> t) {
        ParamVector g(t.begin(), t.end());
        for (double& x : g) x -= center;
        return g;
      });
}

TEST(Stepsize, Examples) {
  const StepSchedule s{15.0, 10.0};
  EXPECT_NEAR(bqc::stepsize(1, s), 15.0 * std::pow(11.0, -1.0 / 3.0), 1e-14);
  EXPECT_NEAR(bqc::stepsize(1, s), 6.7447, 1e-4);
  EXPECT_NEAR(bqc::stepsize(990, s), 1.5, 1e-12);
  for (std::size_t t = 1; t < 5000; ++t) ASSERT_LT(bqc::stepsize(t + 1, s), bqc::stepsize(t, s));
  EXPECT_THROW(bqc::stepsize(0, s), bqc::ContractError);
  EXPECT_DOUBLE_EQ(bqc::stepsize(123, StepSchedule::constant(0.01)), 0.01);
}

TEST(Stepsize, DecayConditions) {
  // eps_t ~ a t^-p: the partial sums of eps grow like t^(1 - p), so the sum diverges for p <= 1.
  const StepSchedule s;
  EXPECT_LE(s.exponent, 1.0);
  EXPECT_GT(s.exponent, 0.0);
  double sum1 = 0.0, sum_hi = 0.0;
  for (std::size_t t = 1; t <= 100000; ++t) {
    const double e = bqc::stepsize(t, s);
    if (t <= 1000) sum1 += e;
    sum_hi += e;
  }
  EXPECT_GT(sum_hi / sum1, 15.0);
  EXPECT_NEAR(bqc::stepsize(1000000000, s) * std::cbrt(1e9), s.a, 1e-6 * s.a);
}

TEST(LogPriorGradient, Examples) {
  const ParamVector theta{0.5, -0.1};
  EXPECT_EQ(bqc::log_prior_gradient(bqc::UniformPrior{}, theta), (ParamVector{0.0, 0.0}));
  EXPECT_EQ(bqc::log_prior_gradient(bqc::LaplacePrior{2.0}, theta), (ParamVector{-2.0, 2.0}));
  const bqc::CustomPrior custom{[](std::span<const double> t) { return ParamVector{t[0] * 10, t[1] * 10}; }};
  EXPECT_EQ(bqc::log_prior_gradient(custom, theta), (ParamVector{5.0, -1.0}));
  const ParamVector with_zero{0.0, 1.0};
  EXPECT_THROW(bqc::log_prior_gradient(bqc::LaplacePrior{1.0}, with_zero), bqc::ContractError);
  EXPECT_THROW(bqc::log_prior_gradient(bqc::LaplacePrior{-1.0}, theta), bqc::ContractError);
}

TEST(GaStep, Examples) {
  const ParamVector one{1.0}, g{1.0}, zero{0.0}, prior{3.0};
  EXPECT_EQ(bqc::ga_step(one, g, zero, 0.5, bqc::kInfiniteBeta), (ParamVector{0.5}));
  EXPECT_EQ(bqc::ga_step(one, g, prior, 0.5, bqc::kInfiniteBeta), bqc::ga_step(one, g, zero, 0.5, 10.0));
  EXPECT_EQ(bqc::ga_step(one, zero, zero, 0.5, 2.0), one);
  EXPECT_DOUBLE_EQ(bqc::ga_step(one, g, prior, 0.5, 2.0)[0], 1.0 + 0.5 * 3.0 / 2.0 - 0.5);
}

TEST(GaStep, IsTextbookGradientDescent) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  ParamVector theta(50), grad(50);
  for (std::size_t i = 0; i < 50; ++i) {
    theta[i] = nd(rng);
    grad[i] = nd(rng);
  }
  const ParamVector zeros(50, 0.0);
  const auto got = bqc::ga_step(theta, grad, zeros, 0.37, bqc::kInfiniteBeta);
  for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(got[i], theta[i] - 0.37 * grad[i]);
}

TEST(SoftThreshold, Examples) {
  EXPECT_DOUBLE_EQ(bqc::soft_threshold(ParamVector{0.5}, 0.2)[0], 0.3);
  EXPECT_EQ(bqc::soft_threshold(ParamVector{0.1}, 0.2)[0], 0.0);
  EXPECT_EQ(bqc::soft_threshold(ParamVector{-0.2}, 0.2)[0], 0.0);
  EXPECT_DOUBLE_EQ(bqc::soft_threshold(ParamVector{-0.5}, 0.2)[0], -0.3);
  EXPECT_THROW(bqc::soft_threshold(ParamVector{0.5}, -0.1), bqc::ContractError);
}

TEST(AdaptiveAlpha, Examples) {
  const ParamVector half{0.1, -0.05, 0.3, 0.2};
  const double a = bqc::adaptive_alpha(half, 1.0, 2);
  EXPECT_DOUBLE_EQ(a, 0.1);
  const auto out = bqc::soft_threshold(half, a * 1.0);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[1], 0.0);
  EXPECT_NE(out[2], 0.0);
  EXPECT_NE(out[3], 0.0);

  EXPECT_EQ(bqc::adaptive_alpha(half, 1.0, 0), 0.0);
  EXPECT_EQ(bqc::soft_threshold(half, 0.0), half);

  const double all = bqc::adaptive_alpha(half, 0.5, 4);
  EXPECT_DOUBLE_EQ(all, 0.3 / 0.5);
  for (double x : bqc::soft_threshold(half, all * 0.5)) EXPECT_EQ(x, 0.0);

  EXPECT_THROW(bqc::adaptive_alpha(half, 1.0, 5), bqc::ContractError);
  EXPECT_THROW(bqc::adaptive_alpha(half, 0.0, 1), bqc::ContractError);
}

TEST(PgaStep, Examples) {
  const ParamVector theta{0.5, 0.05}, zero{0.0, 0.0};
  const auto r = bqc::pga_step(theta, zero, 1.0, 1);
  EXPECT_DOUBLE_EQ(r.theta[0], 0.45);
  EXPECT_EQ(r.theta[1], 0.0);
  EXPECT_DOUBLE_EQ(r.alpha, 0.05);
  EXPECT_FALSE(r.tie);

  const ParamVector g{0.2, -0.4};
  const auto mle = bqc::pga_step(theta, g, 0.5, 0);
  EXPECT_EQ(mle.theta, bqc::ga_step(theta, g, zero, 0.5, bqc::kInfiniteBeta));
  EXPECT_EQ(mle.alpha, 0.0);

  const ParamVector sparse{0.0, 0.8, -0.6, 0.0};
  const ParamVector g0(4, 0.0);
  const auto s = bqc::pga_step(sparse, g0, 1.0, 2);
  EXPECT_EQ(s.theta, (ParamVector{0.0, 0.8, -0.6, 0.0}));
  EXPECT_EQ(s.alpha, 0.0);
}

TEST(PgaStep, TiesAreFlagged) {
  const ParamVector theta{0.3, -0.3, 0.9}, g(3, 0.0);
  const auto r = bqc::pga_step(theta, g, 1.0, 1);
  EXPECT_TRUE(r.tie);
  EXPECT_EQ(r.theta[0], 0.0);
  EXPECT_EQ(r.theta[1], 0.0);
  EXPECT_DOUBLE_EQ(r.theta[2], 0.6);
}

TEST(PgaStep, ExactlyK0ZerosOnRandomData) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (int rep = 0; rep < 500; ++rep) {
    const std::size_t k = 5 + static_cast<std::size_t>(rep % 40);
    const std::size_t k0 = static_cast<std::size_t>(rep) % (k + 1);
    ParamVector theta(k), g(k);
    for (std::size_t i = 0; i < k; ++i) {
      theta[i] = nd(rng);
      g[i] = nd(rng);
    }
    const auto r = bqc::pga_step(theta, g, 0.3, k0);
    std::size_t zeros = 0;
    for (double x : r.theta) zeros += x == 0.0;
    ASSERT_FALSE(r.tie);
    ASSERT_EQ(zeros, k0);
  }
}

TEST(PgaStep, ParametersEnterAndEscapeZero) {
  // Step 1 zeroes index 1; the next gradient drags index 0 under the
  // threshold while index 1 is pushed back out.
  const ParamVector theta0{0.5, 0.1};
  const auto s1 = bqc::pga_step(theta0, ParamVector{0.0, 0.0}, 1.0, 1);
  ASSERT_EQ(s1.theta[1], 0.0);
  ASSERT_NE(s1.theta[0], 0.0);
  const auto s2 = bqc::pga_step(s1.theta, ParamVector{0.35, -1.0}, 1.0, 1);
  EXPECT_EQ(s2.theta[0], 0.0);
  EXPECT_NE(s2.theta[1], 0.0);
}

TEST(PgaFixedAlpha, LassoFixpoint) {
  // C = (theta - 1)^2 / 2 with a fixed threshold alpha*eps: the prox-gradient
  // fixpoint is theta* = 1 - alpha for alpha < 1, and 0 for alpha >= 1.
  for (double alpha : {0.0, 0.2, 0.75, 0.99, 1.0, 1.7}) {
    for (double eps : {0.1, 0.5, 1.0}) {
      ParamVector theta{0.3};
      for (int t = 0; t < 5000; ++t) {
        const ParamVector half{theta[0] - eps * (theta[0] - 1.0)};
        theta = bqc::soft_threshold(half, alpha * eps);
      }
      const double want = std::max(0.0, 1.0 - alpha);
      EXPECT_NEAR(theta[0], want, 1e-12) << "alpha=" << alpha << " eps=" << eps;
      // And it satisfies the fixpoint equation itself.
      const ParamVector again = bqc::soft_threshold(ParamVector{theta[0] - eps * (theta[0] - 1.0)}, alpha * eps);
      EXPECT_NEAR(again[0], theta[0], 1e-12);
    }
  }
}

TEST(SgldStep, Examples) {
  const ParamVector theta{0.4, -0.2}, g{1.0, 2.0}, prior{0.5, 0.5};
  EXPECT_THROW(bqc::sgld_step(theta, g, prior, 0.1, 0.0, {1, 1}), bqc::ContractError);
  EXPECT_THROW(bqc::sgld_step(theta, g, prior, 0.1, -1.0, {1, 1}), bqc::ContractError);
  EXPECT_THROW(bqc::sgld_step(theta, g, prior, 0.1, bqc::kInfiniteBeta, {1, 1}), bqc::ContractError);
  EXPECT_EQ(bqc::sgld_step(theta, g, prior, 0.1, 5.0, {9, 3}), bqc::sgld_step(theta, g, prior, 0.1, 5.0, {9, 3}));
  EXPECT_NE(bqc::sgld_step(theta, g, prior, 0.1, 5.0, {9, 3}), bqc::sgld_step(theta, g, prior, 0.1, 5.0, {9, 4}));
  // Noise is exactly sqrt(2 eps / beta) * counter_normal.
  const auto s = bqc::sgld_step(theta, g, prior, 0.1, 5.0, {9, 3});
  const auto det = bqc::ga_step(theta, g, prior, 0.1, 5.0);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_DOUBLE_EQ(s[k], det[k] + std::sqrt(2 * 0.1 / 5.0) * bqc::counter_normal(9, 3, k));
  }
}

TEST(SgldStep, LargeBetaApproachesGa) {
  const ParamVector theta{0.4, -0.2}, g{1.0, 2.0}, zero{0.0, 0.0};
  const auto s = bqc::sgld_step(theta, g, zero, 0.1, 1e30, {1, 1});
  const auto det = bqc::ga_step(theta, g, zero, 0.1, bqc::kInfiniteBeta);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(s[k], det[k], 1e-14);
}

TEST(SgldStep, UpdateVarianceMatchesClosedForm) {
  // Zero gradients: theta' - theta ~ Normal(0, 2 eps / beta).
  const double eps = 0.01, beta = 4.0;
  const ParamVector theta{0.0}, zero{0.0};
  double s = 0.0, s2 = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double x = bqc::sgld_step(theta, zero, zero, eps, beta, {5, static_cast<std::uint64_t>(i)})[0];
    s += x;
    s2 += x * x;
  }
  const double var = s2 / n - (s / n) * (s / n);
  EXPECT_NEAR(var, 2 * eps / beta, 0.02 * 2 * eps / beta);
}

TEST(CounterNormal, MomentsAndIndependence) {
  double s = 0.0, s2 = 0.0, s4 = 0.0, cross = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = bqc::counter_normal(7, static_cast<std::uint64_t>(i), 0);
    const double y = bqc::counter_normal(7, static_cast<std::uint64_t>(i), 1);
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
    cross += x * y;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
  EXPECT_NEAR(s4 / n, 3.0, 0.1);
  EXPECT_NEAR(cross / n, 0.0, 0.01);
}

TEST(RunTraining, ZeroIterations) {
  TrainConfig cfg;
  cfg.iterations = 0;
  const auto f = half_square(2);
  const auto trace = bqc::run_training(f, {0.3, 0.4}, cfg);
  ASSERT_EQ(trace.size(), 1u);
  EXPECT_EQ(trace.front().theta, (ParamVector{0.3, 0.4}));
  EXPECT_DOUBLE_EQ(trace.front().cost, 0.5 * (0.09 + 0.16));
}

TEST(RunTraining, GaGeometricDecay) {
  TrainConfig cfg;
  cfg.schedule = StepSchedule::constant(0.1);
  cfg.iterations = 50;
  const auto trace = bqc::run_training(half_square(1), {1.0}, cfg);
  ASSERT_EQ(trace.size(), 51u);
  for (const auto& row : trace.rows()) {
    EXPECT_NEAR(row.theta[0], std::pow(0.9, static_cast<double>(row.iter)), 1e-14);
    if (row.iter > 0) EXPECT_DOUBLE_EQ(row.epsilon, 0.1);
  }
}

TEST(RunTraining, PgaKeepsExactlyK0Zeros) {
  const auto c = bqc::build_ansatz(3, 2);
  const bqc::CostEvaluator ev(c, bqc::TfimProblem{0.6});
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e-3, 1e-3);
  ParamVector theta0(c.num_params());
  for (auto& t : theta0) t = u(rng);
  TrainConfig cfg;
  cfg.algorithm = Algorithm::PGA;
  cfg.k0 = 5;
  cfg.iterations = 150;
  cfg.schedule = {1.0, 10.0};
  const auto trace = bqc::run_training(ev, theta0, cfg);
  // The first Rx layer acts on |+>, so its gradients are rounding noise and
  // may tie exactly at the threshold; such iterations are logged.
  const auto& ties = trace.tie_iterations();
  for (const auto& row : trace.rows()) {
    if (row.iter == 0) continue;
    if (std::find(ties.begin(), ties.end(), row.iter) != ties.end()) {
      EXPECT_GT(row.zero_count(), 5u) << "iteration " << row.iter;
    } else {
      ASSERT_EQ(row.zero_count(), 5u) << "iteration " << row.iter;
    }
    EXPECT_GE(row.alpha, 0.0);
  }
  EXPECT_LT(trace.back().cost, trace.front().cost);
}

TEST(RunTraining, PgaNoTiesOnRandomQuadratic) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.5, 2.0);
  const std::size_t k = 40;
  for (int rep = 0; rep < 20; ++rep) {
    ParamVector a(k), c(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = w(rng);
      c[i] = u(rng);
    }
    const bqc::FunctionObjective obj(
        k,
        [&](std::span<const double> t) {
          double v = 0.0;
          for (std::size_t i = 0; i < k; ++i) v += 0.5 * a[i] * (t[i] - c[i]) * (t[i] - c[i]);
          return v;
        },
        [&](std::span<const double> t) {
          ParamVector g(k);
          for (std::size_t i = 0; i < k; ++i) g[i] = a[i] * (t[i] - c[i]);
          return g;
        });
    ParamVector theta0(k);
    for (auto& x : theta0) x = 1e-3 * u(rng);
    TrainConfig cfg;
    cfg.algorithm = Algorithm::PGA;
    cfg.k0 = 12;
    cfg.iterations = 200;
    cfg.schedule = {0.3, 10.0};
    const auto trace = bqc::run_training(obj, theta0, cfg);
    EXPECT_TRUE(trace.tie_iterations().empty());
    for (const auto& row : trace.rows()) {
      if (row.iter > 0) ASSERT_EQ(row.zero_count(), 12u) << "iteration " << row.iter;
    }
  }
}

TEST(RunTraining, SgldStationaryVariance) {
  // C = theta^2 / 2 with constant eps: the Euler-Maruyama chain is AR(1) with
  // stationary variance 1 / (beta (1 - eps / 2)). Pool many independent
  // components to get enough effective samples.
  const std::size_t k = 64;
  for (double beta : {1.0, 10.0}) {
    TrainConfig cfg;
    cfg.algorithm = Algorithm::SGLD;
    cfg.beta = beta;
    cfg.schedule = StepSchedule::constant(1e-2);
    cfg.iterations = 20000;
    cfg.seed = 11;
    const auto trace = bqc::run_training(half_square(k), ParamVector(k, 0.0), cfg);
    const auto second = bqc::ergodic_average(trace, 2000, [](std::span<const double> t) {
      std::vector<double> sq(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) sq[i] = t[i] * t[i];
      return sq;
    });
    double var = 0.0;
    for (double v : second) var += v / static_cast<double>(k);
    EXPECT_NEAR(var * beta, 1.0, 0.1) << "beta=" << beta;
  }
}

TEST(RunTraining, SgldWithInfiniteBetaIsGa) {
  TrainConfig ga, sgld;
  ga.iterations = sgld.iterations = 20;
  sgld.algorithm = Algorithm::SGLD;
  const auto f = half_square(3, 0.5);
  const auto a = bqc::run_training(f, {1.0, 2.0, 3.0}, ga);
  const auto b = bqc::run_training(f, {1.0, 2.0, 3.0}, sgld);
  EXPECT_EQ(a.back().theta, b.back().theta);
}

TEST(RunTraining, ErrorsCarryIteration) {
  TrainConfig cfg;
  cfg.beta = 1.0;
  cfg.prior = bqc::LaplacePrior{1.0};
  cfg.iterations = 5;
  cfg.schedule = StepSchedule::constant(1.0);
  // The first step lands exactly on zero, where the Laplace gradient is undefined.
  const FunctionObjective f(1, [](std::span<const double> t) { return t[0]; },
                            [](std::span<const double>) { return ParamVector{1.0}; });
  try {
    (void)bqc::run_training(f, {2.0}, cfg);
    FAIL() << "expected an error";
  } catch (const bqc::ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("iteration 2"), std::string::npos) << e.what();
  }
}

TEST(RunTraining, RejectsBadConfig) {
  TrainConfig cfg;
  cfg.algorithm = Algorithm::PGA;
  cfg.k0 = 3;
  EXPECT_THROW(bqc::run_training(half_square(2), {0.1, 0.2}, cfg), bqc::ContractError);
  TrainConfig neg;
  neg.beta = -1.0;
  EXPECT_THROW(bqc::run_training(half_square(2), {0.1, 0.2}, neg), bqc::ContractError);
  EXPECT_THROW(bqc::run_training(half_square(2), {0.1}, TrainConfig{}), bqc::ContractError);
}

TEST(ErgodicAverage, Examples) {
  bqc::TrainingTrace trace(1);
  for (std::size_t t = 0; t < 3; ++t) trace.append({t, 0.0, 0.0, 0.0, {static_cast<double>(t + 1)}});
  EXPECT_DOUBLE_EQ(bqc::ergodic_average(trace, 0, [](std::span<const double> x) { return x[0]; }), 2.0);
  EXPECT_DOUBLE_EQ(bqc::ergodic_average(trace, 2, [](std::span<const double> x) { return x[0]; }), 3.0);
  EXPECT_THROW(bqc::ergodic_average(trace, 3, [](std::span<const double> x) { return x[0]; }), bqc::ContractError);

  bqc::TrainingTrace constant(2);
  for (std::size_t t = 0; t < 5; ++t) constant.append({t, 0.0, 0.0, 0.0, {0.25, -1.0}});
  const auto v = bqc::ergodic_average(constant, 1, [](std::span<const double> x) {
    return std::vector<double>(x.begin(), x.end());
  });
  EXPECT_EQ(v, (std::vector<double>{0.25, -1.0}));
}

TEST(ErgodicAverage, BornMixtureIsProbDist) {
  const auto c = bqc::build_ansatz(2, 1);
  bqc::TrainingTrace trace(c.num_params());
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t t = 0; t < 20; ++t) {
    ParamVector th(c.num_params());
    for (auto& x : th) x = u(rng);
    trace.append({t, 0.0, 0.0, 0.0, th});
  }
  const auto mix = bqc::ergodic_average(trace, 5, [&](std::span<const double> th) {
    const auto p = bqc::born_probabilities(bqc::run_circuit(c, th));
    return std::vector<double>(p.probs().begin(), p.probs().end());
  });
  EXPECT_NO_THROW(bqc::ProbDist{mix});
}

TEST(TrainingTrace, CsvFormat) {
  bqc::TrainingTrace trace(2);
  trace.append({0, 0.1, 0.0, 0.0, {1.0 / 3.0, 0.0}});
  trace.append({1, -2.5, 6.7446646953391385, 1e-300, {-0.0, 2.0}});
  std::ostringstream os;
  trace.write_csv(os);
  EXPECT_EQ(os.str(),
            "iter,cost,epsilon,alpha,theta_0,theta_1\n"
            "0,0.10000000000000001,0,0,0.33333333333333331,0\n"
            "1,-2.5,6.7446646953391385,1e-300,-0,2\n");
}

TEST(TrainingTrace, ParseRoundTripIsExact) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 100.0);
  for (int rep = 0; rep < 200; ++rep) {
    bqc::TraceRow row{static_cast<std::size_t>(rep), nd(rng), std::abs(nd(rng)), std::abs(nd(rng)), {}};
    for (int k = 0; k < 4; ++k) row.theta.push_back(nd(rng) * std::pow(10.0, rep % 30 - 15));
    std::ostringstream os;
    bqc::write_trace_row(os, row);
    std::string line = os.str();
    line.pop_back();
    const auto back = bqc::parse_trace_row(line, 4);
    EXPECT_EQ(back.iter, row.iter);
    EXPECT_EQ(back.cost, row.cost);
    EXPECT_EQ(back.theta, row.theta);
  }
  EXPECT_THROW(bqc::parse_trace_row("1,2,3", 1), bqc::IngestionError);
  EXPECT_THROW(bqc::parse_trace_row("1,2,3,4,x", 1), bqc::IngestionError);
}

TEST(TrainingTrace, SpillRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "bqc_spill_test.csv";
  std::filesystem::remove(path);
  bqc::TrainingTrace small(3, 10, path);
  bqc::TrainingTrace big(3);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  for (std::size_t t = 0; t < 40; ++t) {
    bqc::TraceRow row{t, nd(rng), nd(rng), nd(rng), {nd(rng), nd(rng), nd(rng)}};
    small.append(row);
    big.append(row);
  }
  EXPECT_TRUE(small.spilled());
  EXPECT_FALSE(big.spilled());
  EXPECT_EQ(small.size(), 40u);
  std::ostringstream a, b;
  small.write_csv(a);
  big.write_csv(b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(small.back().theta, big.back().theta);
  EXPECT_EQ(small.front().theta, big.front().theta);
  std::size_t seen = 0;
  small.for_each([&](const bqc::TraceRow& r) { EXPECT_EQ(r.iter, seen++); });
  EXPECT_EQ(seen, 40u);
}

TEST(TrainingTrace, RejectsWrongWidth) {
  bqc::TrainingTrace trace(2);
  EXPECT_THROW(trace.append({0, 0.0, 0.0, 0.0, {1.0}}), bqc::ContractError);
  EXPECT_THROW(trace.back(), bqc::ContractError);
}

TEST(TrainingTrace, DeterministicTraining) {
  const auto c = bqc::build_ansatz(3, 1);
  const bqc::CostEvaluator ev(c, bqc::TfimProblem{0.4});
  TrainConfig cfg;
  cfg.algorithm = Algorithm::SGLD;
  cfg.beta = 100.0;
  cfg.iterations = 30;
  cfg.seed = 3;
  cfg.schedule = {0.5, 10.0};
  const ParamVector theta0(c.num_params(), 1e-3);
  std::ostringstream a, b;
  bqc::run_training(ev, theta0, cfg).write_csv(a);
  bqc::run_training(ev, theta0, cfg).write_csv(b);
  EXPECT_EQ(a.str(), b.str());
  cfg.seed = 4;
  std::ostringstream d;
  bqc::run_training(ev, theta0, cfg).write_csv(d);
  EXPECT_NE(a.str(), d.str());
}

}  // namespace
