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

#include "dprocess/trajectory.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "dprocess/error.hpp"

namespace dprocess {
namespace {

TEST(TrajectoryTest, TriangleAlwaysCompletes) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto rec = run({3, 2, seed});
    EXPECT_FALSE(rec.stuck);
    EXPECT_EQ(rec.final_edges, 3u);
    ASSERT_EQ(rec.hitting_times.size(), 1u);
    EXPECT_EQ(rec.hitting_times[0], 2u);
  }
}

TEST(TrajectoryTest, FourVertexMatching) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto rec = run({4, 1, seed});
    EXPECT_FALSE(rec.stuck);
    EXPECT_EQ(rec.final_edges, 2u);
    EXPECT_TRUE(rec.hitting_times.empty());
  }
  EXPECT_EQ(run({2, 1, 0}).final_edges, 1u);
}

TEST(TrajectoryTest, CheckpointsRecordCounts) {
  const std::vector<std::uint64_t> schedule{0, 1, 5, 10};
  const auto rec = run({10, 2, 4}, schedule);
  ASSERT_EQ(rec.checkpoints.size(), 4u);
  EXPECT_EQ(rec.checkpoints[0].s, (std::vector<std::uint64_t>{10, 10}));
  for (const auto& c : rec.checkpoints) {
    EXPECT_EQ(c.s[0] + c.s[1], 20 - 2 * c.step);
  }
}

TEST(TrajectoryTest, ScheduleBeyondEndIgnoredAndUnsortedRejected) {
  const std::vector<std::uint64_t> schedule{2, 3, 1000};
  EXPECT_EQ(run({3, 2, 0}, schedule).checkpoints.size(), 2u);
  const std::vector<std::uint64_t> unsorted{3, 1};
  EXPECT_THROW(run({3, 2, 0}, unsorted), ParameterError);
}

TEST(TrajectoryTest, StuckRunFreezesState) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const ProcessParams params{12, 3, seed};
    const std::vector<std::uint64_t> schedule{0, params.max_edges() - 1};
    const auto rec = run(params, schedule);
    if (!rec.stuck || rec.final_edges >= params.max_edges() - 1) continue;
    ASSERT_EQ(rec.checkpoints.size(), 2u);
    const auto& frozen = rec.checkpoints[1].s;
    EXPECT_EQ(frozen[0] + frozen[1] + frozen[2], 36 - 2 * rec.final_edges);
    for (std::size_t l = 0; l < rec.hitting_times.size(); ++l) {
      EXPECT_EQ(rec.hitting_times[l].has_value(), frozen[l] == 0);
    }
    return;
  }
  GTEST_SKIP() << "no stuck run found";
}

TEST(TrajectoryTest, Deterministic) {
  const auto schedule = log_spaced_schedule({2000, 3, 9}, 20);
  EXPECT_EQ(run({2000, 3, 9}, schedule), run({2000, 3, 9}, schedule));
  EXPECT_NE(run({2000, 3, 9}, schedule), run({2000, 3, 10}, schedule));

  Process reused({2000, 3, 0});
  run(reused, 123, schedule);
  EXPECT_EQ(run(reused, 9, schedule), run({2000, 3, 9}, schedule));
}

TEST(TrajectoryTest, ObserverSeesEveryStep) {
  Process p({50, 2, 0});
  std::uint64_t events = 0;
  const auto rec = run(p, 5, {}, [&](const StepEvent& e, const Process&) {
    events += e.added();
  });
  EXPECT_EQ(events, rec.final_edges);
}

TEST(TrajectoryTest, LogSpacedSchedule) {
  const ProcessParams params{1000, 2, 0};
  const auto s = log_spaced_schedule(params, 0, 900, 30);
  ASSERT_FALSE(s.empty());
  EXPECT_EQ(s.front(), 0u);
  EXPECT_EQ(s.back(), 900u);
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end()));
  EXPECT_EQ(std::adjacent_find(s.begin(), s.end()), s.end());
  // Denser near the end.
  EXPECT_LT(s[s.size() - 1] - s[s.size() - 2], s[1] - s[0]);
}

TEST(TrajectoryTest, JsonRoundTrip) {
  const auto rec = run({500, 3, 1}, log_spaced_schedule({500, 3, 1}, 10));
  const auto j = to_json(rec);
  EXPECT_EQ(j.at("format"), "dprocess.trajectory");
  EXPECT_EQ(j.at("version"), TrajectoryRecord::kFormatVersion);
  EXPECT_EQ(trajectory_from_json(j), rec);
  EXPECT_EQ(trajectory_from_json(nlohmann::json::parse(j.dump())), rec);

  auto bad = j;
  bad["version"] = 99;
  EXPECT_ANY_THROW(trajectory_from_json(bad));
}

}  // namespace
}  // namespace dprocess
