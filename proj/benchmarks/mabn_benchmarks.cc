// Copyright 2026 The MABN Authors.
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

#include <cstdint>
#include <vector>

#include "mabn/config.h"
#include "mabn/exposure.h"
#include "mabn/harness.h"
#include "mabn/inference.h"
#include "mabn/policy.h"
#include "mabn/random.h"

namespace {

using namespace mabn;

void BM_EnumerateLegitimateArms(benchmark::State& state) {
  const RunConfig c = preset_instance(state.range(0) == 0 ? "main_scaled" : "main");
  const Network net = build_network(c.topology.n_units, c.topology.edges);
  const Clustering cl = build_clustering(net, c.topology.clusters);
  const auto m = ExposureMapping::neighbor_fraction_threshold(2, {1, 2});
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_legitimate_arms(m, net, cl, c.witness_budget));
  }
}
BENCHMARK(BM_EnumerateLegitimateArms)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_PolicyRound(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Exp3NCsPolicy policy(n, MadSchedule::power_law(0.27));
  RandomStream rng = make_stream({1});
  std::int64_t t = 0;
  for (auto _ : state) {
    policy.begin_round(++t);
    const std::size_t arm = policy.select(rng);
    policy.observe(arm, bernoulli(rng, 0.5));
  }
}
BENCHMARK(BM_PolicyRound)->Arg(4)->Arg(33)->Arg(256);

void BM_TrackerUpdate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  InferenceTracker tracker(n);
  const std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  RandomStream rng = make_stream({2});
  for (auto _ : state) {
    tracker.update(uniform_index(rng, n), uniform01(rng), probs);
  }
}
BENCHMARK(BM_TrackerUpdate)->Arg(4)->Arg(33)->Arg(256);

void BM_Replication(benchmark::State& state) {
  RunConfig c = preset_instance("main_scaled");
  c.horizon = state.range(0);
  const Experiment e = prepare_experiment(c);
  ReplicationOptions opts;
  opts.cs_pairs = std::vector<ArmPair>{};
  opts.cs_stride = c.output.cs_stride;
  int rep = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_replication(e, MadSchedule::power_law(0.1), rep++, opts));
  }
}
BENCHMARK(BM_Replication)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
