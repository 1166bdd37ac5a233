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

#include <vector>

#include "dprocess/envelopes.hpp"
#include "dprocess/theory.hpp"

namespace {

void BM_EvalTheory(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dprocess::eval_theory(d, t).s.back());
    t = t < 0.45 * d ? t + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_EvalTheory)->Arg(2)->Arg(4)->Arg(6);

void BM_EvalTheoryTinyGap(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dprocess::eval_theory_gap(4, 1e-200).u);
}
BENCHMARK(BM_EvalTheoryTinyGap);

void BM_OdeCrosscheck(benchmark::State& state) {
  std::vector<double> grid;
  for (int g = 0; g <= 100; ++g) grid.push_back(1.45 * g / 100);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dprocess::ode_crosscheck(3, grid, 1e-4).max_abs_error);
  }
}
BENCHMARK(BM_OdeCrosscheck)->Unit(benchmark::kMillisecond);

void BM_SecondEnvelope(benchmark::State& state) {
  const auto b = dprocess::phase_bounds(1000000, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dprocess::envelope_second(1000000, 3, 2, 0, b.i_after[0]));
  }
}
BENCHMARK(BM_SecondEnvelope);

}  // namespace

BENCHMARK_MAIN();
