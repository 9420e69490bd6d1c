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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bqc/errors.hpp"
#include "bqc/experiment.hpp"
#include "bqc/harness.hpp"
#include "bqc/optim.hpp"
#include "bqc/plots.hpp"
#include "bqc/random.hpp"

namespace {

namespace fs = std::filesystem;

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const char* id, const std::string& detail) {
  std::printf("%s INFO %s\n", id, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<double> final_shifted(const bqc::RunResult& r) {
  std::vector<double> out;
  for (const auto& s : r.seeds) {
    if (s.ok) out.push_back(s.final_cost - s.c_min);
  }
  return out;
}

// Post-step rows hold exactly K0 zeros unless the iteration logged a tie,
// in which case they hold more. Returns false on any violation.
bool exact_sparsity(const bqc::RunResult& r, std::size_t k0, std::size_t& rows_checked, std::size_t& ties) {
  bool ok = true;
  for (const auto& s : r.seeds) {
    if (!s.ok) return false;
    const auto& tie_iters = s.trace->tie_iterations();
    ties += tie_iters.size();
    s.trace->for_each([&](const bqc::TraceRow& row) {
      if (row.iter == 0) return;
      ++rows_checked;
      const bool tie = std::find(tie_iters.begin(), tie_iters.end(), row.iter) != tie_iters.end();
      if (tie ? row.zero_count() <= k0 : row.zero_count() != k0) ok = false;
    });
  }
  return ok;
}

// PGA on random quadratics C = sum_k a_k (theta_k - c_k)^2 / 2; returns the
// number of runs that logged a tie.
std::size_t ties_on_random_quadratics(std::size_t runs, std::size_t& rows_checked, bool& ok) {
  const std::size_t k = 64, k0 = 20;
  std::size_t tied_runs = 0;
  for (std::uint64_t run = 0; run < runs; ++run) {
    std::vector<double> a(k), c(k), theta0(k);
    for (std::size_t i = 0; i < k; ++i) {
      a[i] = 0.5 + 1.5 * bqc::to_unit_open(bqc::derive_seed(run, {1, i}));
      c[i] = 2.0 * bqc::to_unit_open(bqc::derive_seed(run, {2, i})) - 1.0;
      theta0[i] = 2e-3 * bqc::to_unit_open(bqc::derive_seed(run, {3, i})) - 1e-3;
    }
    const bqc::FunctionObjective obj(
        k,
        [&](std::span<const double> t) {
          double v = 0.0;
          for (std::size_t i = 0; i < k; ++i) v += 0.5 * a[i] * (t[i] - c[i]) * (t[i] - c[i]);
          return v;
        },
        [&](std::span<const double> t) {
          bqc::GradVector g(k);
          for (std::size_t i = 0; i < k; ++i) g[i] = a[i] * (t[i] - c[i]);
          return g;
        });
    bqc::TrainConfig cfg;
    cfg.algorithm = bqc::Algorithm::PGA;
    cfg.k0 = k0;
    cfg.iterations = 500;
    cfg.schedule = {0.3, 10.0};
    const auto trace = bqc::run_training(obj, theta0, cfg);
    if (!trace.tie_iterations().empty()) ++tied_runs;
    trace.for_each([&](const bqc::TraceRow& row) {
      if (row.iter == 0) return;
      ++rows_checked;
      if (row.zero_count() != k0) ok = false;
    });
  }
  return tied_runs;
}

void c1() {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = 4, depth = 2;
  const bqc::Circuit circuit = bqc::build_ansatz(n, depth);
  std::vector<std::int64_t> samples;
  for (std::uint64_t i = 0; i < 200; ++i) {
    std::int64_t z = 0;
    for (int b = 0; b < 15; ++b) z += bqc::derive_seed(i, {static_cast<std::uint64_t>(b)}) & 1;
    samples.push_back(z);
  }
  const auto data = bqc::make_empirical(samples, n);
  std::vector<bqc::CostEvaluator> costs;
  // Complete graph on n + 1 nodes with U(0, 1) weights.
  std::vector<bqc::Edge> edges;
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      edges.push_back({i, j, bqc::to_unit_open(bqc::derive_seed(11, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)}))});
    }
  }
  costs.emplace_back(circuit, bqc::MaxCutProblem{bqc::WeightedGraph(n + 1, edges)});
  costs.emplace_back(circuit, bqc::TfimProblem{bqc::sample_tfim_g(12)});
  costs.emplace_back(circuit, bqc::MmdProblem{data, bqc::KernelSpec{bqc::median_heuristic(samples)}});
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 5; ++trial) {
    const auto theta = bqc::init_params(circuit.num_params(), std::numbers::pi, 100 + trial);
    for (const auto& c : costs) {
      const auto ps = bqc::parameter_shift_gradient(c, theta);
      const auto fd = bqc::finite_difference_gradient(c, theta, 1e-5);
      for (std::size_t k = 0; k < ps.size(); ++k) worst = std::max(worst, std::abs(ps[k] - fd[k]));
    }
  }
  const double secs = seconds_since(t0);
  report("C1", worst < 1e-6 && secs < 60.0,
         "max |PS - FD| = " + fmt("%.3g", worst) + " over 3 costs x 5 random theta, " + fmt("%.2f", secs) + " s");
}

void c2() {
  double worst_classical = 0.0;
  for (int n = 2; n <= 8; ++n) {
    worst_classical = std::max(worst_classical, std::abs(bqc::tfim_ground_energy(n, 0.0) + (n - 1)));
  }
  double worst_two = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const double g = 2.0 * bqc::counter_normal(777, i, 0);
    worst_two = std::max(worst_two, std::abs(bqc::tfim_ground_energy(2, g) + std::sqrt(4 * g * g + 1)));
  }
  report("C2", worst_classical == 0.0 && worst_two < 1e-9,
         "g=0 max error " + fmt("%.3g", worst_classical) + ", N=2 max error " + fmt("%.3g", worst_two));
}

bqc::ExperimentSpec tfim_spec(int n, int depth, bqc::Algorithm algorithm, std::size_t seeds, double a) {
  bqc::ExperimentSpec spec;
  spec.problem = bqc::TfimSpec{n};
  spec.depth = depth;
  spec.train.algorithm = algorithm;
  spec.train.iterations = 500;
  spec.train.schedule.a = a;
  spec.n_seeds = seeds;
  return spec;
}

// TFIM runs use a = 1; the a = 15 default diverges on this problem (step
// sizes stay above 2 / lambda_max of the cost Hessian). The default-schedule
// result is printed for reference.
constexpr double kTfimStepScale = 1.0;

void c3_c5(const bqc::RunResult& genmodel, std::size_t genmodel_k0) {
  const auto t0 = std::chrono::steady_clock::now();
  auto spec = tfim_spec(6, 6, bqc::Algorithm::PGA, 5, kTfimStepScale);
  spec.removal_fraction = 0.3;
  const auto result = bqc::run_experiment(spec, {1, false});
  const double med = result.median_shifted_cost.back();
  report("C3", result.completed() == 5 && med < 0.1,
         "median final C - E0 = " + fmt("%.4g", med) + " (N=6 L=6 PGA 30%, T=500, 5 seeds, a=1), " +
             fmt("%.1f", seconds_since(t0)) + " s");

  auto default_schedule = spec;
  default_schedule.train.schedule.a = 15.0;
  const auto default_result = bqc::run_experiment(default_schedule, {1, false});
  info("C3", "with a=15: median final C - E0 = " + fmt("%.4g", default_result.median_shifted_cost.back()));

  std::size_t rows = 0, ties = 0;
  bool ok = exact_sparsity(result, spec.resolved_k0(), rows, ties);
  ok = exact_sparsity(genmodel, genmodel_k0, rows, ties) && ok;
  std::size_t random_rows = 0;
  const std::size_t tied_runs = ties_on_random_quadratics(20, random_rows, ok);
  report("C5", ok && tied_runs == 0,
         std::to_string(rows) + " TFIM/MMD PGA iterates hold exactly K0 zeros outside " + std::to_string(ties) +
             " logged ties; " + std::to_string(tied_runs) + "/20 random-quadratic runs tied (" +
             std::to_string(random_rows) + " iterates)");
}

void c4(const fs::path& dir) {
  const auto t0 = std::chrono::steady_clock::now();
  auto ga = tfim_spec(6, 1, bqc::Algorithm::GA, 10, kTfimStepScale);
  auto sgld3 = ga;
  sgld3.train.algorithm = bqc::Algorithm::SGLD;
  sgld3.train.beta = 1e3;
  sgld3.output_dir = dir / "c4_sgld_a";
  auto sgld2 = sgld3;
  sgld2.train.beta = 1e2;
  const double m_ga = bqc::median(final_shifted(bqc::run_experiment(ga, {1, false})));
  const double m3 = bqc::median(final_shifted(bqc::run_experiment(sgld3, {1, true})));
  const double m2 = bqc::median(final_shifted(bqc::run_experiment(sgld2, {1, false})));
  report("C4", m3 <= m_ga && m2 > m3,
         "median final shifted cost: GA " + fmt("%.4f", m_ga) + ", SGLD(1e3) " + fmt("%.4f", m3) + ", SGLD(1e2) " +
             fmt("%.4f", m2) + " (N=6 L=1, T=500, 10 seeds, a=1), " + fmt("%.1f", seconds_since(t0)) + " s");

  for (auto* s : {&ga, &sgld3}) s->train.schedule.a = 15.0;
  const double p_ga = bqc::median(final_shifted(bqc::run_experiment(ga, {1, false})));
  const double p3 = bqc::median(final_shifted(bqc::run_experiment(sgld3, {1, false})));
  info("C4", "with a=15: GA " + fmt("%.4f", p_ga) + ", SGLD(1e3) " + fmt("%.4f", p3));
}

bqc::ExperimentSpec genmodel_spec(std::size_t iterations, std::size_t seeds) {
  bqc::ExperimentSpec spec;
  spec.problem = bqc::GenModelSpec{fs::path(BQC_DATA_DIR) / "stamps_surrogate.txt", 8};
  spec.depth = 7;
  spec.train.algorithm = bqc::Algorithm::PGA;
  spec.train.iterations = iterations;
  spec.n_seeds = seeds;
  return spec;
}

void c6() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = genmodel_spec(200, 5);
  const auto rows = bqc::compile_stats_experiment(spec, {0.0, 0.15, 0.3, 0.45, 0.6});
  double worst = 0.0;
  std::size_t instances = 0;
  bool monotone = true;
  std::string trend;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& inst : rows[i].instances) {
      worst = std::max(worst, inst.equivalence_error);
      ++instances;
    }
    if (i > 0 && rows[i].median_cz > rows[i - 1].median_cz) monotone = false;
    trend += (i ? "," : "") + fmt("%g", rows[i].median_cz);
  }
  report("C6", instances == 25 && worst < 1e-12 && monotone,
         "max Born error " + fmt("%.3g", worst) + " over " + std::to_string(instances) + " instances; median CZ " +
             trend + " (N=8 L=7, T=200, 5 seeds), " + fmt("%.1f", seconds_since(t0)) + " s");
}

bqc::RunResult c7_c8(const fs::path& dir, bqc::ExperimentSpec& spec) {
  const auto t0 = std::chrono::steady_clock::now();
  spec = genmodel_spec(500, 1);
  spec.removal_fraction = 0.45;
  spec.output_dir = dir / "c7_a";
  auto result = bqc::run_experiment(spec, {1, true});
  const auto& run = result.seeds.front();
  const double initial = run.trace->front().cost, final = run.trace->back().cost;
  const auto draw = bqc::generated_samples(result, 1000, 0);
  const double tv = bqc::total_variation(bqc::empirical_distribution(draw), result.data->dist);
  report("C7", run.ok && final < 0.1 * initial && tv < 0.35,
         "MMD " + fmt("%.4g", initial) + " -> " + fmt("%.4g", final) + ", TV(1000 samples, data) = " + fmt("%.3f", tv) +
             " (N=8 L=7 PGA 45%, T=500), " + fmt("%.1f", seconds_since(t0)) + " s");

  const auto rows = bqc::tv_shot_experiment(run.final_theta, result.circuit, {100, 10000}, {0, 1, 2, 3, 4});
  const double tv2 = rows[0].median_tv, tv4 = rows[1].median_tv;
  report("C8", tv4 < tv2 && tv4 < 0.15,
         "median TV over 5 seeds: 1e2 shots " + fmt("%.4f", tv2) + ", 1e4 shots " + fmt("%.4f", tv4));
  return result;
}

void c9() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t k = 256, burn = 10000, samples = 100000;
  const double eps = 1e-3;
  bool ok = true;
  std::string detail;
  for (double beta : {1.0, 10.0}) {
    std::vector<double> theta(k, 0.0);
    const std::vector<double> zero(k, 0.0);
    const std::uint64_t seed = bqc::derive_seed(9, {static_cast<std::uint64_t>(beta)});
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t t = 0; t < burn + samples; ++t) {
      // C = theta^2 / 2 per component, so grad C = theta.
      theta = bqc::sgld_step(theta, theta, zero, eps, beta, {seed, t});
      if (t < burn) continue;
      for (double x : theta) {
        sum += x;
        sum2 += x * x;
      }
    }
    const double n = static_cast<double>(samples * k);
    const double mean = sum / n, var = sum2 / n - mean * mean;
    const double rel = std::abs(var * beta - 1.0);
    if (!(rel < 0.1)) ok = false;
    detail += "beta=" + fmt("%g", beta) + " var=" + fmt("%.5f", var) + " (rel err " + fmt("%.3f", rel) + ") ";
  }
  report("C9", ok, detail + "over 1e5 samples x 256 independent components, " + fmt("%.1f", seconds_since(t0)) + " s");
}

void c10(const fs::path& dir, const bqc::ExperimentSpec& c7_spec) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::size_t files = 0;
  auto expect_same = [&](const fs::path& a, const fs::path& b) {
    const auto x = slurp(a);
    if (x.empty() || x != slurp(b)) ok = false;
    ++files;
  };

  auto sgld = tfim_spec(6, 1, bqc::Algorithm::SGLD, 10, kTfimStepScale);
  sgld.train.beta = 1e3;
  sgld.output_dir = dir / "c4_sgld_b";
  (void)bqc::run_experiment(sgld, {2, true});
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto name = "trace_" + std::to_string(s) + ".csv";
    expect_same(dir / "c4_sgld_a" / name, dir / "c4_sgld_b" / name);
  }

  auto pga = c7_spec;
  pga.output_dir = dir / "c7_b";
  (void)bqc::run_experiment(pga, {1, true});
  expect_same(dir / "c7_a" / "trace_0.csv", dir / "c7_b" / "trace_0.csv");
  expect_same(dir / "c7_a" / "aggregate.csv", dir / "c7_b" / "aggregate.csv");

  report("C10", ok,
         std::to_string(files) + " CSVs byte-identical on rerun (SGLD with 1 vs 2 threads, PGA MMD), " +
             fmt("%.1f", seconds_since(t0)) + " s");
}

}  // namespace

int main() {
  const fs::path dir = fs::temp_directory_path() / ("bqc_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  try {
    c1();
    c2();
    bqc::ExperimentSpec c7_spec;
    const auto genmodel = c7_c8(dir, c7_spec);
    c3_c5(genmodel, c7_spec.resolved_k0());
    c4(dir);
    c6();
    c9();
    c10(dir, c7_spec);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    fs::remove_all(dir);
    return 2;
  }
  fs::remove_all(dir);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
