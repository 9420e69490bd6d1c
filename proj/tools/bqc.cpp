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

// bqc: train, sample and compile parameterised circuits from the command line.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "bqc/circuit.hpp"
#include "bqc/costs.hpp"
#include "bqc/errors.hpp"
#include "bqc/experiment.hpp"
#include "bqc/plots.hpp"
#include "bqc/statevector.hpp"

namespace {

struct ProblemFlags {
  std::string config;
  std::string problem = "tfim";
  int n_qubits = 6;
  int n_nodes = 12;
  std::string dataset;
  int depth = 1;
  std::string algorithm = "ga";
  std::size_t iterations = 1000;
  std::string beta = "inf";
  std::size_t k0 = 0;
  double removal_fraction = -1.0;
  std::uint64_t shots = 0;
  double init_radius = 1e-3;
  double a = 15.0;
  double b = 10.0;
};

void add_problem_flags(CLI::App* app, ProblemFlags& f) {
  app->add_option("--config", f.config, "experiment spec (JSON); other problem flags are ignored");
  app->add_option("--problem", f.problem, "maxcut | tfim | genmodel")->check(CLI::IsMember({"maxcut", "tfim", "genmodel"}));
  app->add_option("--n-qubits", f.n_qubits, "qubits (tfim, genmodel)");
  app->add_option("--n-nodes", f.n_nodes, "graph nodes (maxcut)");
  app->add_option("--dataset", f.dataset, "integer dataset (genmodel)");
  app->add_option("--depth", f.depth, "ansatz depth L");
  app->add_option("--algorithm", f.algorithm, "ga | pga | sgld")->check(CLI::IsMember({"ga", "pga", "sgld"}));
  app->add_option("--iterations", f.iterations, "training iterations T");
  app->add_option("--beta", f.beta, "inverse temperature, or inf");
  app->add_option("--k0", f.k0, "parameters held at zero (pga)");
  app->add_option("--removal-fraction", f.removal_fraction, "fraction of parameters held at zero (pga)");
  app->add_option("--shots", f.shots, "shot-based gradients with this many shots (0 = exact)");
  app->add_option("--init-radius", f.init_radius, "theta_0 ~ U(-r, r)");
  app->add_option("--step-a", f.a, "stepsize scale a");
  app->add_option("--step-b", f.b, "stepsize offset b");
}

bqc::ExperimentSpec spec_from_flags(const ProblemFlags& f) {
  if (!f.config.empty()) return bqc::load_experiment_spec(f.config);
  bqc::ExperimentSpec spec;
  if (f.problem == "maxcut") {
    spec.problem = bqc::MaxCutSpec{f.n_nodes};
  } else if (f.problem == "tfim") {
    spec.problem = bqc::TfimSpec{f.n_qubits};
  } else {
    if (f.dataset.empty()) throw bqc::ContractError("--dataset is required for genmodel");
    spec.problem = bqc::GenModelSpec{f.dataset, f.n_qubits};
  }
  spec.depth = f.depth;
  spec.train.algorithm = f.algorithm == "ga" ? bqc::Algorithm::GA
                         : f.algorithm == "pga" ? bqc::Algorithm::PGA
                                                : bqc::Algorithm::SGLD;
  spec.train.iterations = f.iterations;
  spec.train.k0 = f.k0;
  spec.train.schedule.a = f.a;
  spec.train.schedule.b = f.b;
  if (f.beta == "inf" || f.beta == "infinity") {
    spec.train.beta = bqc::kInfiniteBeta;
  } else {
    try {
      spec.train.beta = std::stod(f.beta);
    } catch (const std::exception&) {
      throw bqc::ContractError("--beta must be a number or inf, got '" + f.beta + "'");
    }
  }
  if (f.removal_fraction >= 0.0) spec.removal_fraction = f.removal_fraction;
  if (f.shots > 0) spec.n_shots = f.shots;
  if (!(f.init_radius > 0.0)) throw bqc::ContractError("--init-radius must be positive");
  spec.init_radius = f.init_radius;
  return spec;
}

bqc::Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bqc::IngestionError("cannot open circuit " + path);
  bqc::Circuit c = bqc::read_circuit(in);
  if (!c.is_bound()) throw bqc::ContractError("circuit " + path + " has unbound parameter slots");
  return c;
}

std::vector<std::uint64_t> seed_list(std::uint64_t base, std::size_t n) {
  std::vector<std::uint64_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = base + i;
  return s;
}

void print_counts(const std::string& label, const bqc::GateCounts& c) {
  std::cout << label << ",cz=" << c.cz << ",rx=" << c.rx << ",rz=" << c.rz << ",h=" << c.h << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian training of parameterised quantum circuits"};
  app.require_subcommand(1);

  ProblemFlags train_flags;
  std::uint64_t train_seed = 0;
  std::string train_out = "bqc_out";
  auto* train = app.add_subcommand("train", "single training run");
  add_problem_flags(train, train_flags);
  train->add_option("--seed", train_seed, "experiment seed");
  train->add_option("--out", train_out, "output directory");

  std::string exp_config;
  std::uint64_t exp_seed = 0;
  std::string exp_out;
  unsigned exp_threads = 1;
  bool exp_no_plots = false;
  auto* experiment = app.add_subcommand("experiment", "multi-seed experiment from a spec file");
  experiment->add_option("config", exp_config, "experiment spec (JSON)")->required();
  auto* seed_opt = experiment->add_option("--seed", exp_seed, "base seed (overrides the spec)");
  experiment->add_option("--out", exp_out, "output directory (overrides the spec)");
  experiment->add_option("--threads", exp_threads, "worker threads over seeds");
  experiment->add_flag("--no-plots", exp_no_plots, "skip SVG output");

  std::string cs_circuit, cs_config, cs_out = "bqc_out";
  std::vector<double> cs_fractions{0.0, 0.15, 0.3, 0.45, 0.6};
  unsigned cs_threads = 1;
  std::uint64_t cs_seed = 0;
  auto* compile_stats = app.add_subcommand("compile-stats", "gate counts after pruning and CZ cancellation");
  compile_stats->add_option("--circuit", cs_circuit, "bound circuit file: report its counts before/after compilation");
  auto* cs_seed_opt = compile_stats->add_option("--seed", cs_seed, "base seed (overrides the spec)");
  compile_stats->add_option("--config", cs_config, "experiment spec: sweep removal fractions with PGA");
  compile_stats->add_option("--fractions", cs_fractions, "removal fractions")->delimiter(',');
  compile_stats->add_option("--out", cs_out, "output directory for compile_stats.csv");
  compile_stats->add_option("--threads", cs_threads, "worker threads over seeds");

  std::string tv_circuit, tv_out;
  std::vector<std::uint64_t> tv_shots{100, 1000, 10000};
  std::size_t tv_n_seeds = 5;
  std::uint64_t tv_seed = 0;
  auto* tv = app.add_subcommand("tv-shots", "total variation of shot histograms vs the exact distribution");
  tv->add_option("--circuit", tv_circuit, "bound circuit file")->required();
  tv->add_option("--shots", tv_shots, "shot counts")->delimiter(',');
  tv->add_option("--seeds", tv_n_seeds, "number of seeds");
  tv->add_option("--seed", tv_seed, "first seed");
  tv->add_option("--out", tv_out, "write tv_shots.csv here instead of stdout");

  std::string sample_circuit;
  std::uint64_t sample_shots = 1000, sample_seed = 0;
  auto* sample = app.add_subcommand("sample", "draw bitstrings from a bound circuit");
  sample->add_option("--circuit", sample_circuit, "bound circuit file")->required();
  sample->add_option("--shots", sample_shots, "number of samples");
  sample->add_option("--seed", sample_seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      bqc::ExperimentSpec spec = spec_from_flags(train_flags);
      spec.n_seeds = 1;
      spec.base_seed = train_seed;
      spec.output_dir = train_out;
      const auto result = bqc::run_experiment(spec);
      const auto& run = result.seeds.front();
      if (!run.ok) throw std::runtime_error(run.error);
      {
        std::ofstream c(spec.output_dir / "circuit.txt");
        bqc::write_circuit(c, bqc::bind_parameters(result.circuit, run.final_theta));
        std::ofstream cc(spec.output_dir / "compiled.txt");
        bqc::write_circuit(cc, bqc::compile(result.circuit, run.final_theta));
      }
      bqc::emit_plots(result, spec.output_dir);
      std::cout << "seed " << run.seed << ": final cost " << bqc::format_double(run.final_cost) << ", C_min "
                << bqc::format_double(run.c_min) << ", shifted " << bqc::format_double(run.final_cost - run.c_min)
                << '\n';
    } else if (*experiment) {
      bqc::ExperimentSpec spec = bqc::load_experiment_spec(exp_config);
      if (*seed_opt) spec.base_seed = exp_seed;
      if (!exp_out.empty()) spec.output_dir = exp_out;
      if (spec.output_dir.empty()) spec.output_dir = "bqc_out";
      const auto result = bqc::run_experiment(spec, {exp_threads, true});
      if (!exp_no_plots) bqc::emit_plots(result, spec.output_dir);
      std::cout << result.completed() << "/" << result.seeds.size() << " seeds completed; median final shifted cost "
                << bqc::format_double(result.median_shifted_cost.back()) << '\n';
    } else if (*compile_stats) {
      if (!cs_circuit.empty()) {
        const bqc::Circuit c = load_circuit(cs_circuit);
        print_counts("original", bqc::gate_counts(c));
        print_counts("compiled", bqc::gate_counts(bqc::compile(c, {})));
      } else if (!cs_config.empty()) {
        bqc::ExperimentSpec spec = bqc::load_experiment_spec(cs_config);
        if (*cs_seed_opt) spec.base_seed = cs_seed;
        const auto rows = bqc::compile_stats_experiment(spec, cs_fractions, {cs_threads, false});
        std::filesystem::create_directories(cs_out);
        bqc::write_compile_stats_csv(rows, std::filesystem::path(cs_out) / "compile_stats.csv");
        std::cout << "fraction,median_cz,median_cost\n";
        for (const auto& r : rows) {
          std::cout << bqc::format_double(r.fraction) << ',' << bqc::format_double(r.median_cz) << ','
                    << bqc::format_double(r.median_cost) << '\n';
        }
      } else {
        throw bqc::ContractError("compile-stats needs --circuit or --config");
      }
    } else if (*tv) {
      const bqc::Circuit c = load_circuit(tv_circuit);
      const auto rows = bqc::tv_shot_experiment({}, c, tv_shots, seed_list(tv_seed, tv_n_seeds));
      if (tv_out.empty()) {
        bqc::write_tv_csv(rows, std::cout);
      } else {
        std::filesystem::create_directories(tv_out);
        std::ofstream out(std::filesystem::path(tv_out) / "tv_shots.csv");
        bqc::write_tv_csv(rows, out);
      }
    } else if (*sample) {
      const bqc::Circuit c = load_circuit(sample_circuit);
      const auto dist = bqc::born_probabilities(bqc::run_circuit(c, {}));
      const auto shots = bqc::sample_counts(dist, sample_shots, sample_seed);
      std::cout << "outcome,bitstring,count\n";
      for (const auto& [z, n] : shots.counts) {
        std::cout << z << ',' << bqc::encode_int(z, c.num_qubits()) << ',' << n << '\n';
      }
    }
  } catch (const bqc::ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const bqc::IngestionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const bqc::SizeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const bqc::IndexError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
