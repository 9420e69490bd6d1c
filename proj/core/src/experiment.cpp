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

#include "bqc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bqc/errors.hpp"
#include "bqc/harness.hpp"
#include "bqc/random.hpp"

namespace bqc {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Algorithm parse_algorithm(const std::string& s) {
  if (s == "ga") return Algorithm::GA;
  if (s == "pga") return Algorithm::PGA;
  if (s == "sgld") return Algorithm::SGLD;
  throw IngestionError("unknown algorithm '" + s + "' (expected ga, pga or sgld)");
}

double parse_beta(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfiniteBeta;
    throw IngestionError("beta must be a number or \"inf\"");
  }
  return j.get<double>();
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1U), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
}

}  // namespace

int ExperimentSpec::n_qubits() const {
  return std::visit(overloaded{
                        [](const MaxCutSpec& p) { return p.n_nodes - 1; },
                        [](const TfimSpec& p) { return p.n_qubits; },
                        [](const GenModelSpec& p) { return p.n_qubits; },
                    },
                    problem);
}

std::size_t ExperimentSpec::num_params() const {
  return 2 * static_cast<std::size_t>(n_qubits()) * static_cast<std::size_t>(depth + 1);
}

std::size_t ExperimentSpec::resolved_k0() const {
  if (!removal_fraction) return train.k0;
  const double f = *removal_fraction;
  if (!(f >= 0.0 && f <= 1.0)) throw ContractError("removal fraction must be in [0, 1]");
  return static_cast<std::size_t>(std::llround(f * static_cast<double>(num_params())));
}

ExperimentSpec parse_experiment_spec(std::string_view text, const std::filesystem::path& base_dir) {
  ExperimentSpec spec;
  try {
    const json j = json::parse(text);
    const json& p = j.at("problem");
    const auto type = p.at("type").get<std::string>();
    if (type == "maxcut") {
      spec.problem = MaxCutSpec{p.value("n_nodes", 12)};
    } else if (type == "tfim") {
      spec.problem = TfimSpec{p.value("n_qubits", 11)};
    } else if (type == "genmodel") {
      std::filesystem::path ds = p.at("dataset").get<std::string>();
      if (ds.is_relative() && !base_dir.empty() && std::filesystem::exists(base_dir / ds)) ds = base_dir / ds;
      spec.problem = GenModelSpec{ds, p.value("n_qubits", 8)};
    } else {
      throw IngestionError("unknown problem type '" + type + "'");
    }
    if (j.contains("ansatz")) {
      const json& a = j["ansatz"];
      spec.depth = a.value("depth", 1);
      if (a.contains("n_qubits") && a["n_qubits"].get<int>() != spec.n_qubits()) {
        throw IngestionError("ansatz n_qubits does not match the problem (" + std::to_string(spec.n_qubits()) +
                             " qubits)");
      }
    }
    if (j.contains("train")) {
      const json& t = j["train"];
      spec.train.algorithm = parse_algorithm(t.value("algorithm", std::string("ga")));
      spec.train.iterations = t.value("iterations", std::size_t{1000});
      if (t.contains("beta")) spec.train.beta = parse_beta(t["beta"]);
      spec.train.k0 = t.value("k0", std::size_t{0});
      if (t.contains("removal_fraction")) spec.removal_fraction = t["removal_fraction"].get<double>();
      spec.train.schedule.a = t.value("a", 15.0);
      spec.train.schedule.b = t.value("b", 10.0);
      spec.train.schedule.exponent = t.value("exponent", 1.0 / 3.0);
      if (t.contains("shots") && !t["shots"].is_null()) spec.n_shots = t["shots"].get<std::uint64_t>();
      if (t.contains("prior")) {
        const json& pr = t["prior"];
        const auto kind = pr.value("type", std::string("uniform"));
        if (kind == "uniform") {
          spec.train.prior = UniformPrior{};
        } else if (kind == "laplace") {
          spec.train.prior = LaplacePrior{pr.value("alpha", 0.0)};
        } else {
          throw IngestionError("unknown prior '" + kind + "'");
        }
      }
    }
    spec.n_seeds = j.value("n_seeds", std::size_t{20});
    spec.base_seed = j.value("seed", std::uint64_t{0});
    spec.init_radius = j.value("init_radius", 1e-3);
    spec.burn_in = j.value("burn_in", std::size_t{400});
    if (j.contains("output_dir")) spec.output_dir = j["output_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw IngestionError(std::string("experiment spec: ") + e.what());
  }
  if (spec.n_seeds < 1) throw IngestionError("n_seeds must be >= 1");
  if (!(spec.init_radius > 0.0)) throw IngestionError("init_radius must be positive");
  if (spec.depth < 0) throw IngestionError("ansatz depth must be >= 0");
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open experiment spec " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_spec(buf.str(), path.parent_path());
}

std::string to_json(const ExperimentSpec& spec) {
  json j;
  std::visit(overloaded{
                 [&](const MaxCutSpec& p) { j["problem"] = {{"type", "maxcut"}, {"n_nodes", p.n_nodes}}; },
                 [&](const TfimSpec& p) { j["problem"] = {{"type", "tfim"}, {"n_qubits", p.n_qubits}}; },
                 [&](const GenModelSpec& p) {
                   j["problem"] = {{"type", "genmodel"}, {"dataset", p.dataset.string()}, {"n_qubits", p.n_qubits}};
                 },
             },
             spec.problem);
  j["ansatz"] = {{"depth", spec.depth}, {"n_qubits", spec.n_qubits()}};
  json t;
  t["algorithm"] = std::string(to_string(spec.train.algorithm));
  t["iterations"] = spec.train.iterations;
  t["beta"] = std::isinf(spec.train.beta) ? json("inf") : json(spec.train.beta);
  t["k0"] = spec.resolved_k0();
  if (spec.removal_fraction) t["removal_fraction"] = *spec.removal_fraction;
  t["a"] = spec.train.schedule.a;
  t["b"] = spec.train.schedule.b;
  t["exponent"] = spec.train.schedule.exponent;
  if (spec.n_shots) t["shots"] = *spec.n_shots;
  if (const auto* lap = std::get_if<LaplacePrior>(&spec.train.prior)) {
    t["prior"] = {{"type", "laplace"}, {"alpha", lap->alpha}};
  } else {
    t["prior"] = {{"type", "uniform"}};
  }
  j["train"] = t;
  j["n_seeds"] = spec.n_seeds;
  j["seed"] = spec.base_seed;
  j["init_radius"] = spec.init_radius;
  j["burn_in"] = spec.burn_in;
  if (!spec.output_dir.empty()) j["output_dir"] = spec.output_dir.string();
  return j.dump(2);
}

std::size_t RunResult::completed() const {
  return static_cast<std::size_t>(std::count_if(seeds.begin(), seeds.end(), [](const SeedRun& s) { return s.ok; }));
}

std::uint64_t instance_seed(std::uint64_t seed) { return derive_seed(seed, {1}); }
std::uint64_t init_seed(std::uint64_t seed) { return derive_seed(seed, {2}); }
std::uint64_t train_seed(std::uint64_t seed) { return derive_seed(seed, {3}); }

ProblemInstance make_instance(const ExperimentSpec& spec, std::uint64_t seed,
                              const std::optional<EmpiricalDist>& data) {
  const int n = spec.n_qubits();
  Circuit circuit = build_ansatz(n, spec.depth);
  EvalMode mode = ExactMode{};
  if (spec.n_shots) mode = ShotMode{*spec.n_shots, derive_seed(train_seed(seed), {4})};

  return std::visit(
      overloaded{
          [&](const MaxCutSpec& p) {
            WeightedGraph graph = gen_3regular_weighted(p.n_nodes, instance_seed(seed));
            const double c_min = -maxcut_optimum(graph).value;
            return ProblemInstance{CostEvaluator(std::move(circuit), MaxCutProblem{graph}, mode), c_min,
                                   std::nullopt, std::move(graph)};
          },
          [&](const TfimSpec&) {
            const double g = sample_tfim_g(instance_seed(seed));
            return ProblemInstance{CostEvaluator(std::move(circuit), TfimProblem{g}, mode),
                                   tfim_ground_energy(n, g), g, std::nullopt};
          },
          [&](const GenModelSpec&) {
            if (!data) throw ContractError("generative-model instance needs a dataset");
            const KernelSpec kernel{median_heuristic(data->samples)};
            return ProblemInstance{CostEvaluator(std::move(circuit), MmdProblem{*data, kernel}, mode), 0.0,
                                   std::nullopt, std::nullopt};
          },
      },
      spec.problem);
}

void write_aggregate_csv(const RunResult& result, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "iter,median_shifted_cost\n";
  for (std::size_t t = 0; t < result.median_shifted_cost.size(); ++t) {
    out << t << ',' << format_double(result.median_shifted_cost[t]) << '\n';
  }
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  if (spec.n_seeds < 1) throw ContractError("n_seeds must be >= 1");
  RunResult result;
  result.spec = spec;
  result.circuit = build_ansatz(spec.n_qubits(), spec.depth);
  if (const auto* gm = std::get_if<GenModelSpec>(&spec.problem)) {
    result.data = load_integer_dataset(gm->dataset, gm->n_qubits);
    result.kernel = KernelSpec{median_heuristic(result.data->samples)};
  }
  if (options.write_files) {
    if (spec.output_dir.empty()) throw ContractError("output_dir is required when writing files");
    std::filesystem::create_directories(spec.output_dir);
  }

  TrainConfig config = spec.train;
  config.k0 = spec.resolved_k0();
  const std::size_t k_params = spec.num_params();

  result.seeds.resize(spec.n_seeds);
  std::mutex log_mutex;
  parallel_for(spec.n_seeds, options.threads, [&](std::size_t i) {
    SeedRun& run = result.seeds[i];
    run.seed = spec.base_seed + i;
    try {
      ProblemInstance inst = make_instance(spec, run.seed, result.data);
      run.c_min = inst.c_min;
      run.g = inst.g;
      run.graph = std::move(inst.graph);
      TrainConfig cfg = config;
      cfg.seed = train_seed(run.seed);
      if (!cfg.spill_path.empty()) {
        cfg.spill_path += "." + std::to_string(run.seed);
      }
      TrainingTrace trace = run_training(inst.evaluator, init_params(k_params, spec.init_radius, init_seed(run.seed)), cfg);
      run.final_theta = trace.back().theta;
      run.final_cost = trace.back().cost;
      if (options.write_files) {
        trace.write_csv(spec.output_dir / ("trace_" + std::to_string(run.seed) + ".csv"));
      }
      run.trace = std::move(trace);
      run.ok = true;
    } catch (const std::exception& e) {
      run.ok = false;
      run.error = e.what();
      std::lock_guard lock(log_mutex);
      std::cerr << "seed " << run.seed << " failed: " << e.what() << '\n';
    }
  });

  if (result.completed() == 0) throw std::runtime_error("no seed completed");

  const std::size_t n_rows = spec.train.iterations + 1;
  std::vector<std::vector<double>> shifted(n_rows);
  for (const SeedRun& run : result.seeds) {
    if (!run.ok) continue;
    run.trace->for_each([&](const TraceRow& row) { shifted[row.iter].push_back(row.cost - run.c_min); });
  }
  result.median_shifted_cost.reserve(n_rows);
  for (auto& column : shifted) result.median_shifted_cost.push_back(median(std::move(column)));

  if (result.data) {
    const SeedRun& first = *std::find_if(result.seeds.begin(), result.seeds.end(), [](const SeedRun& s) { return s.ok; });
    const bool ergodic = spec.train.algorithm == Algorithm::SGLD && !std::isinf(spec.train.beta) &&
                         spec.burn_in < first.trace->size();
    if (ergodic) {
      auto p = ergodic_average(*first.trace, spec.burn_in, [&](std::span<const double> theta) {
        const auto d = born_probabilities(run_circuit(result.circuit, theta));
        return std::vector<double>(d.probs().begin(), d.probs().end());
      });
      result.model_distribution = ProbDist(std::move(p));
    } else {
      result.model_distribution = born_probabilities(run_circuit(result.circuit, first.final_theta));
    }
  }

  if (options.write_files) {
    write_aggregate_csv(result, spec.output_dir / "aggregate.csv");
    std::ofstream(spec.output_dir / "spec.json", std::ios::trunc) << to_json(spec) << '\n';
  }
  return result;
}

std::vector<CompileStatsRow> compile_stats_experiment(const ExperimentSpec& spec,
                                                      const std::vector<double>& fractions,
                                                      const RunOptions& options) {
  std::vector<CompileStatsRow> rows;
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw ContractError("removal fractions must lie in [0, 1]");
    ExperimentSpec run_spec = spec;
    run_spec.train.algorithm = Algorithm::PGA;
    run_spec.removal_fraction = f;
    const RunResult result = run_experiment(run_spec, {options.threads, false});

    CompileStatsRow row;
    row.fraction = f;
    row.k0 = run_spec.resolved_k0();
    std::vector<double> cz, cost;
    for (const SeedRun& run : result.seeds) {
      if (!run.ok) continue;
      const Circuit compiled = compile(result.circuit, run.final_theta);
      const ProbDist p = born_probabilities(run_circuit(result.circuit, run.final_theta));
      const ProbDist q = born_probabilities(run_circuit(compiled, {}));
      double err = 0.0;
      for (std::size_t z = 0; z < p.size(); ++z) err = std::max(err, std::abs(p[z] - q[z]));
      CompileInstance inst{run.seed, gate_counts(result.circuit), gate_counts(compiled), run.final_cost, err};
      cz.push_back(static_cast<double>(inst.compiled.cz));
      cost.push_back(inst.final_cost);
      row.instances.push_back(inst);
    }
    row.median_cz = median(cz);
    row.median_cost = median(cost);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_compile_stats_csv(const std::vector<CompileStatsRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "fraction,median_cz,median_cost\n";
  for (const auto& r : rows) {
    out << format_double(r.fraction) << ',' << format_double(r.median_cz) << ',' << format_double(r.median_cost)
        << '\n';
  }
}

std::vector<TvShotRow> tv_shot_experiment(std::span<const double> theta, const Circuit& circuit,
                                          const std::vector<std::uint64_t>& shot_grid,
                                          const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ContractError("tv_shot_experiment needs at least one seed");
  const ProbDist exact = born_probabilities(run_circuit(circuit, theta));
  std::vector<TvShotRow> rows;
  for (std::uint64_t n : shot_grid) {
    TvShotRow row;
    row.n_shots = n;
    for (std::uint64_t s : seeds) {
      const auto shots = sample_counts(exact, n, derive_seed(s, {n}));
      row.per_seed.push_back(total_variation(empirical_distribution(shots), exact));
    }
    double sum = 0.0;
    for (double v : row.per_seed) sum += v;
    row.mean_tv = sum / static_cast<double>(row.per_seed.size());
    row.median_tv = median(row.per_seed);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_tv_csv(const std::vector<TvShotRow>& rows, std::ostream& os) {
  os << "n_shots,mean_tv,median_tv\n";
  for (const auto& r : rows) os << r.n_shots << ',' << format_double(r.mean_tv) << ',' << format_double(r.median_tv) << '\n';
}

}  // namespace bqc
