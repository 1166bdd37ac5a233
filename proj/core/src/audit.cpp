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

#include <algorithm>
#include <cmath>

#include "dprocess/envelopes.hpp"
#include "dprocess/theory.hpp"

namespace dprocess {

bool AuditSummary::any_violation() const {
  return std::any_of(cells.begin(), cells.end(),
                     [](const EnvelopeCell& c) { return c.violations > 0; });
}

double AuditSummary::max_normalized() const {
  double m = 0.0;
  for (const auto& c : cells) m = std::max(m, c.max_normalized);
  return m;
}

std::size_t AuditSummary::violations_in_phase(int phase) const {
  std::size_t total = 0;
  for (const auto& c : cells) {
    if (c.phase == phase) total += c.violations;
  }
  return total;
}

AuditSummary audit_trajectory(const TrajectoryRecord& record, AuditMode mode) {
  const std::uint64_t n = record.params.n;
  const int d = static_cast<int>(record.params.d);
  const PhaseBounds bounds = phase_bounds(n, d);

  AuditSummary summary;
  summary.mode = mode;
  if (mode == AuditMode::kFirst) {
    for (int j = 0; j < d; ++j) summary.cells.push_back({-1, j});
  } else {
    for (int k = 0; k + 2 <= d; ++k) {
      for (int j = k; j < d; ++j) summary.cells.push_back({k, j});
    }
  }
  auto cell = [&](int phase, int j) -> EnvelopeCell& {
    if (phase < 0) return summary.cells[j];
    // Cells for phase k start after sum_{p<k} (d - p) entries.
    std::size_t offset = 0;
    for (int p = 0; p < phase; ++p) offset += d - p;
    return summary.cells[offset + (j - phase)];
  };

  for (const Checkpoint& cp : record.checkpoints) {
    const auto i = static_cast<std::int64_t>(cp.step);
    if (i >= bounds.max_edges) {
      ++summary.ignored_checkpoints;
      continue;
    }
    int phase = -1;
    if (mode == AuditMode::kFirst) {
      if (i > bounds.i_trans) {
        ++summary.ignored_checkpoints;
        continue;
      }
    } else {
      const auto k = bounds.phase_of(i);
      if (!k) {
        ++summary.ignored_checkpoints;
        continue;
      }
      phase = *k;
    }
    const StepTheory th = eval_theory_at_step(n, d, static_cast<double>(i));
    const double first = phase < 0 ? envelope_first(n, d, i) : 0.0;
    for (int j = std::max(phase, 0); j < d; ++j) {
      const double envelope =
          phase < 0 ? first
                    : 4.0 * envelope_second_unchecked(n, d, j, phase, static_cast<double>(i));
      const double deviation = std::abs(static_cast<double>(cp.s[j]) - th.ns[j]);
      EnvelopeCell& c = cell(phase, j);
      ++c.checked;
      if (deviation > envelope) ++c.violations;
      c.max_normalized = std::max(c.max_normalized, deviation / envelope);
    }
  }
  return summary;
}

nlohmann::json to_json(const AuditSummary& summary) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : summary.cells) {
    cells.push_back({{"phase", c.phase},
                     {"j", c.j},
                     {"checked", c.checked},
                     {"violations", c.violations},
                     {"max_normalized", c.max_normalized}});
  }
  return {{"mode", summary.mode == AuditMode::kFirst ? "first" : "second"},
          {"cells", cells},
          {"ignored_checkpoints", summary.ignored_checkpoints},
          {"any_violation", summary.any_violation()},
          {"max_normalized", summary.max_normalized()}};
}

}  // namespace dprocess
