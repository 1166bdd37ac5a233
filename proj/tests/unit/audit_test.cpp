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

#include "dprocess/audit.hpp"

#include <gtest/gtest.h>

#include "dprocess/envelopes.hpp"
#include "dprocess/experiment.hpp"
#include "dprocess/theory.hpp"

namespace dprocess {
namespace {

TrajectoryRecord synthetic(std::uint32_t n, std::uint32_t d) {
  TrajectoryRecord rec;
  rec.params = {n, d, 0};
  return rec;
}

// Checkpoint whose counts follow the deterministic trajectory exactly.
Checkpoint on_trend(std::uint32_t n, std::uint32_t d, std::int64_t i) {
  const auto th = eval_theory_at_step(n, static_cast<int>(d), static_cast<double>(i));
  Checkpoint cp{static_cast<std::uint64_t>(i), {}};
  for (double v : th.ns) cp.s.push_back(static_cast<std::uint64_t>(std::llround(v)));
  return cp;
}

TEST(AuditTest, StartHasNoDeviation) {
  auto rec = synthetic(10000, 3);
  rec.checkpoints.push_back({0, {10000, 10000, 10000}});
  const auto a = audit_trajectory(rec, AuditMode::kFirst);
  EXPECT_FALSE(a.any_violation());
  EXPECT_EQ(a.max_normalized(), 0.0);
  ASSERT_EQ(a.cells.size(), 3u);
  EXPECT_EQ(a.cells[0].checked, 1u);
}

TEST(AuditTest, InflatedCountIsFlagged) {
  const std::uint32_t n = 10000, d = 3;
  const std::int64_t i = 5000;
  auto rec = synthetic(n, d);
  Checkpoint cp = on_trend(n, d, i);
  cp.s[0] += static_cast<std::uint64_t>(10 * envelope_first(n, d, i));
  rec.checkpoints.push_back(cp);
  const auto a = audit_trajectory(rec, AuditMode::kFirst);
  EXPECT_TRUE(a.any_violation());
  EXPECT_EQ(a.cells[0].violations, 1u);
  EXPECT_EQ(a.cells[1].violations, 0u);
  EXPECT_GT(a.cells[0].max_normalized, 9.0);
  EXPECT_EQ(a.violations_in_phase(-1), 1u);
}

TEST(AuditTest, SecondModeUsesPhaseCells) {
  const std::uint32_t n = 100000, d = 3;
  const auto b = phase_bounds(n, d);
  auto rec = synthetic(n, d);
  rec.checkpoints.push_back(on_trend(n, d, 1000));  // first phase: ignored here
  Checkpoint cp = on_trend(n, d, b.i_after[0] + 1);
  cp.s[2] += static_cast<std::uint64_t>(
      5 * 4 * envelope_second(n, d, 2, 1, b.i_after[0] + 1));
  rec.checkpoints.push_back(cp);
  rec.checkpoints.push_back({static_cast<std::uint64_t>(b.max_edges), {0, 0, 0}});
  const auto a = audit_trajectory(rec, AuditMode::kSecond);
  EXPECT_EQ(a.ignored_checkpoints, 2u);
  ASSERT_EQ(a.cells.size(), 5u);  // phase 0: j=0..2, phase 1: j=1..2
  EXPECT_EQ(a.violations_in_phase(0), 0u);
  EXPECT_EQ(a.violations_in_phase(1), 1u);
  EXPECT_EQ(a.cells[3].checked, 1u);
  EXPECT_EQ(a.cells[3].violations, 0u);
  EXPECT_EQ(a.cells[4].violations, 1u);

  const auto j = to_json(a);
  EXPECT_EQ(j.at("mode"), "second");
  EXPECT_EQ(j.at("any_violation"), true);
}

TEST(AuditTest, RealRunsStayInsideFirstEnvelope) {
  ExperimentConfig config;
  config.n = 100000;
  config.d = 3;
  config.master_seed = 21;
  const auto schedule = checkpoint_schedule(config);
  Process p({config.n, config.d, 0});
  int violating = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto rec = run(p, trial_seed(config.master_seed, t), schedule);
    violating += audit_trajectory(rec, AuditMode::kFirst).any_violation();
  }
  EXPECT_LE(violating, 1);
}

}  // namespace
}  // namespace dprocess
