// Copyright 2026 The eepc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "eepc/centralized.hpp"
#include "eepc/feasibility.hpp"
#include "eepc/fractional.hpp"
#include "eepc/game.hpp"
#include "eepc/scenario.hpp"

namespace {

eepc::NetworkModel synthetic_model(std::size_t users, std::size_t blocks) {
  eepc::SyntheticScenario sc;
  sc.num_users = users;
  sc.num_blocks = blocks;
  sc.rate_target_max = 0.3;
  sc.seed = 7;
  return generate(sc);
}

void BM_SolveGee(benchmark::State& state) {
  const eepc::NetworkModel model = synthetic_model(state.range(0), 1);
  const eepc::PowerAllocation start = eepc::default_start(model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eepc::solve_gee(model, start));
  }
}
BENCHMARK(BM_SolveGee)->Arg(2)->Arg(4)->Arg(8);

void BM_BestResponse(benchmark::State& state) {
  const eepc::NetworkModel model = synthetic_model(state.range(0), 1);
  const eepc::PowerAllocation others = eepc::PowerAllocation::budget_fraction(model, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eepc::best_response_single_block(model, others, 0));
  }
}
BENCHMARK(BM_BestResponse)->Arg(2)->Arg(8);

void BM_BestResponseDynamics(benchmark::State& state) {
  const eepc::NetworkModel model = synthetic_model(state.range(0), 1);
  const eepc::PowerAllocation start = eepc::PowerAllocation::budget_fraction(model, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eepc::run_best_response(model, start));
  }
}
BENCHMARK(BM_BestResponseDynamics)->Arg(2)->Arg(4);

void BM_SpectralRadius(benchmark::State& state) {
  const eepc::NetworkModel model = synthetic_model(state.range(0), 1);
  const eepc::FeasibilitySystem sys = eepc::build_feasibility_system(model);
  for (auto _ : state) {
    benchmark::DoNotOptimize(eepc::spectral_radius(sys.coupling));
  }
}
BENCHMARK(BM_SpectralRadius)->Arg(4)->Arg(16);

void BM_ScalarEePrice(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(eepc::ee_optimal_price(0.7, 120.0, 1e6, 0.01));
  }
}
BENCHMARK(BM_ScalarEePrice);

void BM_GenerateMassiveMimo(benchmark::State& state) {
  eepc::MassiveMimoScenario sc;
  sc.num_users = 5;
  sc.num_antennas = state.range(0);
  for (auto _ : state) {
    sc.seed += 1;
    benchmark::DoNotOptimize(eepc::generate(sc));
  }
}
BENCHMARK(BM_GenerateMassiveMimo)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
