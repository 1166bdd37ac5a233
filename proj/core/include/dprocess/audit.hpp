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

#ifndef DPROCESS_AUDIT_HPP_
#define DPROCESS_AUDIT_HPP_

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprocess/trajectory.hpp"

namespace dprocess {

enum class AuditMode {
  kFirst,   // |S^(j) - n s_j| <= E_first(i) for i <= i_trans
  kSecond,  // |S^(j) - n s_j| <= 4 E_{j,k}(i) for i in I_k, j >= k
};

/// Result for one (phase, j) cell. phase is -1 for the first phase and k for
/// I_k.
struct EnvelopeCell {
  int phase = -1;
  int j = 0;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double max_normalized = 0.0;  // max |S - n s_j| / envelope
};

struct AuditSummary {
  AuditMode mode = AuditMode::kFirst;
  std::vector<EnvelopeCell> cells;
  std::size_t ignored_checkpoints = 0;  // outside the monitored phases

  bool any_violation() const;
  double max_normalized() const;
  /// Violations summed over cells with the given phase index.
  std::size_t violations_in_phase(int phase) const;
};

/// Compares every checkpoint of `record` against the envelope of its phase.
/// The final step floor(dn/2) and checkpoints outside the phases of `mode`
/// are counted in ignored_checkpoints.
AuditSummary audit_trajectory(const TrajectoryRecord& record, AuditMode mode);

nlohmann::json to_json(const AuditSummary& summary);

}  // namespace dprocess

#endif  // DPROCESS_AUDIT_HPP_
