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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bqc/circuit.hpp"
#include "bqc/costs.hpp"
#include "bqc/gradient.hpp"
#include "bqc/optim.hpp"

namespace bqc {

struct MaxCutSpec {
  int n_nodes = 12;
};
struct TfimSpec {
  int n_qubits = 11;
};
struct GenModelSpec {
  std::filesystem::path dataset;
  int n_qubits = 8;
};
using ProblemSpec = std::variant<MaxCutSpec, TfimSpec, GenModelSpec>;

struct ExperimentSpec {
  ProblemSpec problem = TfimSpec{};
  int depth = 1;
  TrainConfig train;
  // When set, K0 = round(removal_fraction * K) overrides train.k0.
  std::optional<double> removal_fraction;
  // Shot-based gradients; exact statevector costs when absent.
  std::optional<std::uint64_t> n_shots;
  std::size_t n_seeds = 20;
  std::uint64_t base_seed = 0;
  double init_radius = 1e-3;
  std::size_t burn_in = 400;
  std::filesystem::path output_dir;

  int n_qubits() const;
  std::size_t num_params() const;
  std::size_t resolved_k0() const;
};

// JSON layout:
// {
//   "problem": {"type": "maxcut", "n_nodes": 12}
//            | {"type": "tfim", "n_qubits": 11}
//            | {"type": "genmodel", "dataset": "stamps.txt", "n_qubits": 8},
//   "ansatz": {"depth": 7, "n_qubits": 11},          // n_qubits optional
//   "train": {"algorithm": "ga" | "pga" | "sgld", "iterations": 1000,
//             "beta": 1000 | "inf", "k0": 0, "removal_fraction": 0.3,
//             "a": 15, "b": 10, "exponent": 0.333, "shots": 1000,
//             "prior": {"type": "uniform" | "laplace", "alpha": 0.1}},
//   "n_seeds": 20, "seed": 0, "init_radius": 0.001, "burn_in": 400,
//   "output_dir": "out"
// }
// Relative dataset paths resolve against `base_dir` first.
ExperimentSpec parse_experiment_spec(std::string_view json_text,
                                     const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);
std::string to_json(const ExperimentSpec& spec);

struct SeedRun {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double c_min = 0.0;             // oracle optimum for the instance
  std::optional<double> g;        // TFIM field
  std::optional<WeightedGraph> graph;
  std::optional<TrainingTrace> trace;
  ParamVector final_theta;
  double final_cost = 0.0;
};

struct RunResult {
  ExperimentSpec spec;
  Circuit circuit;
  std::vector<SeedRun> seeds;
  // Median over completed seeds of cost_t - C_min, one entry per iteration.
  std::vector<double> median_shifted_cost;
  std::optional<EmpiricalDist> data;
  std::optional<KernelSpec> kernel;
  // Generative model of the first completed seed: the final iterate, or the
  // ergodic average after burn-in for SGLD.
  std::optional<ProbDist> model_distribution;

  std::size_t completed() const;
};

struct RunOptions {
  unsigned threads = 1;
  bool write_files = true;
};

// Builds the evaluator for one seed's problem instance and reports its
// C_min. Exposed so single runs and experiments share the instance logic.
struct ProblemInstance {
  CostEvaluator evaluator;
  double c_min = 0.0;
  std::optional<double> g;
  std::optional<WeightedGraph> graph;
};
ProblemInstance make_instance(const ExperimentSpec& spec, std::uint64_t seed,
                              const std::optional<EmpiricalDist>& data);

// Child seeds of an experiment seed.
std::uint64_t instance_seed(std::uint64_t seed);
std::uint64_t init_seed(std::uint64_t seed);
std::uint64_t train_seed(std::uint64_t seed);

// Seeds base_seed .. base_seed + n_seeds - 1, each with a fresh instance and
// theta_0. Writes trace_<seed>.csv and aggregate.csv into output_dir when
// write_files is set. Per-seed failures are recorded in the result.
RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

void write_aggregate_csv(const RunResult& result, const std::filesystem::path& path);

struct CompileInstance {
  std::uint64_t seed = 0;
  GateCounts original;
  GateCounts compiled;
  double final_cost = 0.0;
  // max_z |p_original(z) - p_compiled(z)| at the trained parameters.
  double equivalence_error = 0.0;
};

struct CompileStatsRow {
  double fraction = 0.0;
  std::size_t k0 = 0;
  double median_cz = 0.0;
  double median_cost = 0.0;
  std::vector<CompileInstance> instances;
};

// PGA with K0 = round(fraction * K) per fraction, then prune + cancel.
std::vector<CompileStatsRow> compile_stats_experiment(const ExperimentSpec& spec,
                                                      const std::vector<double>& removal_fractions,
                                                      const RunOptions& options = {});
void write_compile_stats_csv(const std::vector<CompileStatsRow>& rows, const std::filesystem::path& path);

struct TvShotRow {
  std::uint64_t n_shots = 0;
  double mean_tv = 0.0;
  double median_tv = 0.0;
  std::vector<double> per_seed;
};

// TV between the empirical shot distribution and the exact Born
// distribution of the circuit at theta, for each shot count and seed.
std::vector<TvShotRow> tv_shot_experiment(std::span<const double> theta, const Circuit& circuit,
                                          const std::vector<std::uint64_t>& shot_grid,
                                          const std::vector<std::uint64_t>& seeds);
void write_tv_csv(const std::vector<TvShotRow>& rows, std::ostream& os);

}  // namespace bqc
