// Copyright 2026 The lbgame Authors
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

#include "lbgame/best_response.h"
#include "lbgame/dynamics.h"
#include "lbgame/oracle.h"
#include "lbgame/random.h"
#include "lbgame/scenario.h"

namespace {

void BM_Optimal(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  lbgame::Xoshiro256StarStar rng(1);
  std::vector<double> mu(n);
  for (auto& m : mu) m = rng.Uniform(5, 50);
  const lbgame::ResidualRates residual(mu);
  const lbgame::GameConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lbgame::Optimal(residual, 0.4 * residual.total(),
                                             config));
  }
}
BENCHMARK(BM_Optimal)->Arg(4)->Arg(16)->Arg(64);

void BM_Run(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto scenario = lbgame::Generate(
      lbgame::DefaultWorkload(lbgame::WorkloadKind::kLow), size, size, 7);
  const auto initial = lbgame::InitialState(scenario);
  std::int64_t rounds = 0;
  for (auto _ : state) {
    auto report = lbgame::Run(initial, scenario.config);
    rounds = report.rounds;
    benchmark::DoNotOptimize(report);
  }
  state.counters["rounds"] = static_cast<double>(rounds);
}
BENCHMARK(BM_Run)->Arg(6)->Arg(16)->Arg(32);

void BM_BruteBestResponse(benchmark::State& state) {
  const int G = static_cast<int>(state.range(0));
  const auto scenario = lbgame::Generate(
      lbgame::DefaultWorkload(lbgame::WorkloadKind::kGaussianAverage), 4, 4,
      3);
  const auto initial = lbgame::InitialState(scenario);
  const lbgame::GridSpec grid{4, G};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lbgame::BruteBestResponse(initial, 0, grid));
  }
  state.SetItemsProcessed(state.iterations() *
                          lbgame::SimplexPointCount(4, G));
}
BENCHMARK(BM_BruteBestResponse)->Arg(20)->Arg(50)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
