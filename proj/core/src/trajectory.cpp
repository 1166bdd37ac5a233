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
#include <cmath>
#include <string>

#include "dprocess/error.hpp"

namespace dprocess {

bool TrajectoryRecord::operator==(const TrajectoryRecord& other) const {
  return params.n == other.params.n && params.d == other.params.d &&
         params.seed == other.params.seed &&
         hitting_times == other.hitting_times &&
         checkpoints == other.checkpoints && final_edges == other.final_edges &&
         stuck == other.stuck;
}

TrajectoryRecord run(const ProcessParams& params,
                     std::span<const std::uint64_t> schedule) {
  Process process(params);
  return run(process, params.seed, schedule);
}

TrajectoryRecord run(Process& process, std::uint64_t seed,
                     std::span<const std::uint64_t> schedule,
                     const StepObserver& observer) {
  if (!std::is_sorted(schedule.begin(), schedule.end())) {
    throw ParameterError("checkpoint schedule must be sorted");
  }
  process.reset(seed);
  const ProcessParams& params = process.params();
  const std::uint64_t max_edges = params.max_edges();
  const std::size_t tracked = params.d >= 2 ? params.d - 1 : 0;

  TrajectoryRecord record;
  record.params = params;
  record.hitting_times.assign(tracked, std::nullopt);

  auto next_checkpoint = schedule.begin();
  const auto end_checkpoint =
      std::upper_bound(schedule.begin(), schedule.end(), max_edges);
  std::size_t next_level = 0;
  auto s = process.s_counts();

  auto take_checkpoints = [&] {
    while (next_checkpoint != end_checkpoint &&
           *next_checkpoint <= process.steps()) {
      if (*next_checkpoint == process.steps() || process.stuck()) {
        record.checkpoints.push_back(
            {*next_checkpoint, std::vector<std::uint64_t>(s.begin(), s.end())});
      }
      ++next_checkpoint;
    }
  };

  take_checkpoints();
  while (!process.finished()) {
    const StepEvent event = process.step();
    if (!event.added()) break;
    while (next_level < tracked && s[next_level] == 0) {
      record.hitting_times[next_level++] = process.steps();
    }
    if (observer) observer(event, process);
    take_checkpoints();
  }
  if (process.stuck()) {
    // Frozen graph: every remaining scheduled step sees the final state.
    for (; next_checkpoint != end_checkpoint; ++next_checkpoint) {
      record.checkpoints.push_back(
          {*next_checkpoint, std::vector<std::uint64_t>(s.begin(), s.end())});
    }
  }
  record.final_edges = process.steps();
  record.stuck = process.stuck();
  return record;
}

std::vector<std::uint64_t> log_spaced_schedule(const ProcessParams& params,
                                               std::uint64_t first,
                                               std::uint64_t last, int count) {
  const std::uint64_t max_edges = params.max_edges();
  if (count <= 0 || first > last) return {};
  last = std::min(last, max_edges - 1);
  first = std::min(first, last);
  // Remaining-steps range [max_edges - last, max_edges - first], both >= 1.
  const double hi = std::log(static_cast<double>(max_edges - first));
  const double lo = std::log(static_cast<double>(max_edges - last));
  std::vector<std::uint64_t> steps;
  steps.reserve(count);
  for (int c = 0; c < count; ++c) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(c) / (count - 1);
    const auto remaining =
        static_cast<std::uint64_t>(std::llround(std::exp(hi + (lo - hi) * frac)));
    const std::uint64_t step = max_edges - std::clamp(remaining, max_edges - last,
                                                      max_edges - first);
    steps.push_back(step);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

std::vector<std::uint64_t> log_spaced_schedule(const ProcessParams& params,
                                               int count) {
  return log_spaced_schedule(params, 0, params.max_edges() - 1, count);
}

nlohmann::json to_json(const TrajectoryRecord& record) {
  nlohmann::json hitting = nlohmann::json::array();
  for (const auto& t : record.hitting_times) {
    hitting.push_back(t ? nlohmann::json(*t) : nlohmann::json(nullptr));
  }
  nlohmann::json checkpoints = nlohmann::json::array();
  for (const auto& c : record.checkpoints) {
    checkpoints.push_back({{"step", c.step}, {"S", c.s}});
  }
  return {
      {"format", "dprocess.trajectory"},
      {"version", TrajectoryRecord::kFormatVersion},
      {"n", record.params.n},
      {"d", record.params.d},
      {"seed", record.params.seed},
      {"hitting_times", hitting},
      {"final_edges", record.final_edges},
      {"stuck", record.stuck},
      {"checkpoints", checkpoints},
  };
}

TrajectoryRecord trajectory_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "dprocess.trajectory" ||
        j.at("version") != TrajectoryRecord::kFormatVersion) {
      throw IoError("unsupported trajectory format/version");
    }
    TrajectoryRecord record;
    record.params.n = j.at("n").get<std::uint32_t>();
    record.params.d = j.at("d").get<std::uint32_t>();
    record.params.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& t : j.at("hitting_times")) {
      record.hitting_times.push_back(
          t.is_null() ? std::nullopt
                      : std::optional<std::uint64_t>(t.get<std::uint64_t>()));
    }
    for (const auto& c : j.at("checkpoints")) {
      record.checkpoints.push_back(
          {c.at("step").get<std::uint64_t>(),
           c.at("S").get<std::vector<std::uint64_t>>()});
    }
    record.final_edges = j.at("final_edges").get<std::uint64_t>();
    record.stuck = j.at("stuck").get<bool>();
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed trajectory record: ") + e.what());
  }
}

}  // namespace dprocess
