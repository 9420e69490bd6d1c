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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "bqc/circuit.hpp"
#include "bqc/gradient.hpp"
#include "bqc/harness.hpp"
#include "bqc/statevector.hpp"

namespace {

void BM_ApplyRx(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  bqc::StateVector psi = bqc::init_zero_state(n);
  const bqc::Gate g = bqc::Gate::rx(n / 2, 0);
  for (auto _ : state) {
    bqc::apply_gate(psi, g, 0.1);
    benchmark::DoNotOptimize(psi);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ApplyRx)->DenseRange(6, 18, 4);

void BM_ApplyCz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  bqc::StateVector psi = bqc::init_zero_state(n);
  const bqc::Gate g = bqc::Gate::cz(0, n - 1);
  for (auto _ : state) {
    bqc::apply_gate(psi, g);
    benchmark::DoNotOptimize(psi);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(BM_ApplyCz)->DenseRange(6, 18, 4);

void BM_RunAnsatz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bqc::Circuit c = bqc::build_ansatz(n, 7);
  const auto theta = bqc::init_params(c.num_params(), 3.0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(bqc::run_circuit(c, theta));
}
BENCHMARK(BM_RunAnsatz)->Arg(6)->Arg(8)->Arg(11);

void BM_TfimGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const bqc::CostEvaluator ev(bqc::build_ansatz(n, 6), bqc::TfimProblem{0.4});
  const auto theta = bqc::init_params(ev.num_params(), 1.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(bqc::parameter_shift_gradient(ev, theta));
}
BENCHMARK(BM_TfimGradient)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MmdCostAndGradient(benchmark::State& state) {
  std::vector<std::int64_t> samples;
  for (std::int64_t z = 60; z <= 131; ++z) samples.push_back(z);
  const auto data = bqc::make_empirical(samples, 8);
  const bqc::CostEvaluator ev(bqc::build_ansatz(8, 7),
                              bqc::MmdProblem{data, bqc::KernelSpec{bqc::median_heuristic(samples)}});
  const auto theta = bqc::init_params(ev.num_params(), 1.0, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ev.cost(theta));
    benchmark::DoNotOptimize(ev.gradient(theta));
  }
}
BENCHMARK(BM_MmdCostAndGradient)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
