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

#ifndef DPROCESS_TRAJECTORY_HPP_
#define DPROCESS_TRAJECTORY_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprocess/process.hpp"

namespace dprocess {

struct Checkpoint {
  std::uint64_t step = 0;
  std::vector<std::uint64_t> s;

  bool operator==(const Checkpoint&) const = default;
};

/// Output of one run. hitting_times[l] is the first step at which no vertex
/// of degree <= l remains (l = 0..d-2); std::nullopt if the run got stuck
/// before that happened.
struct TrajectoryRecord {
  static constexpr int kFormatVersion = 1;

  ProcessParams params;
  std::vector<std::optional<std::uint64_t>> hitting_times;
  std::vector<Checkpoint> checkpoints;
  std::uint64_t final_edges = 0;
  bool stuck = false;

  bool operator==(const TrajectoryRecord& other) const;
};

/// Called after every accepted edge, with the event and the process state
/// after the edge was added.
using StepObserver = std::function<void(const StepEvent&, const Process&)>;

/// Runs one process from the empty graph to saturation or the stuck step.
/// `schedule` must be sorted; entries beyond floor(dn/2) are ignored. If the
/// run gets stuck, later checkpoints record the frozen state.
TrajectoryRecord run(const ProcessParams& params,
                     std::span<const std::uint64_t> schedule = {});

/// Same as run(), reusing `process` (reset to `seed`) to avoid allocation.
TrajectoryRecord run(Process& process, std::uint64_t seed,
                     std::span<const std::uint64_t> schedule,
                     const StepObserver& observer = {});

/// `count` checkpoints in [first, last], evenly spaced in log(floor(dn/2) - i)
/// so that they crowd towards the end of the process. Sorted, deduplicated.
std::vector<std::uint64_t> log_spaced_schedule(const ProcessParams& params,
                                               std::uint64_t first,
                                               std::uint64_t last, int count);

/// `count` checkpoints spread over [0, floor(dn/2) - 1].
std::vector<std::uint64_t> log_spaced_schedule(const ProcessParams& params,
                                               int count);

nlohmann::json to_json(const TrajectoryRecord& record);
TrajectoryRecord trajectory_from_json(const nlohmann::json& j);

}  // namespace dprocess

#endif  // DPROCESS_TRAJECTORY_HPP_
