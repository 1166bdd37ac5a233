// Copyright 2026 The dprocess Authors.
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

#include "dprocess/trajectory.hpp"

namespace {

using dprocess::Process;
using dprocess::trial_seed;

// Full run to saturation; reports time per added edge.
void BM_FullRun(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  const auto d = static_cast<std::uint32_t>(state.range(1));
  Process p({n, d, 0});
  std::uint64_t t = 0, edges = 0;
  for (auto _ : state) {
    const auto rec = dprocess::run(p, trial_seed(1, t++), {});
    edges += rec.final_edges;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(edges));
}
BENCHMARK(BM_FullRun)
    ->Args({1000, 2})
    ->Args({100000, 2})
    ->Args({100000, 3})
    ->Args({100000, 5})
    ->Unit(benchmark::kMillisecond);

void BM_EdgeClassCounts(benchmark::State& state) {
  Process p({100000, 3, 2});
  for (int i = 0; i < 100000; ++i) p.step();
  for (auto _ : state) benchmark::DoNotOptimize(p.edge_class_counts().total);
}
BENCHMARK(BM_EdgeClassCounts)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
