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

#ifndef DPROCESS_ANALYSIS_HPP_
#define DPROCESS_ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprocess/experiment.hpp"
#include "dprocess/stats.hpp"

namespace dprocess {

struct AnalysisOptions {
  double level = 0.01;
  int permutations = 999;
  std::uint64_t seed = 0;
  /// Overrides the file's exclude_stuck setting when set.
  std::optional<bool> include_stuck;
};

/// Distribution of V^(l) against Exp(1).
struct LevelSummary {
  int ell = 0;
  std::size_t samples = 0;
  double mean = 0.0;
  double ks = 0.0;
};

struct ProbeSummary {
  double r = 0.0;
  int ell = -1;  // -1: all levels jointly, each at the same r
  std::size_t samples = 0;
  double frequency = 0.0;
  double expected = 0.0;  // e^{-r}, or e^{-(d-1) r} for the joint probe
};

struct PairReport {
  int ell_a = 0;
  int ell_b = 0;
  IndependenceReport report;
};

struct AnalysisReport {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::size_t rows = 0;
  std::size_t stuck_rows = 0;
  std::size_t used_rows = 0;
  std::vector<LevelSummary> levels;
  double first_phase_violation_rate = 0.0;
  std::vector<double> second_phase_violation_rate;  // per k
  std::vector<ProbeSummary> probes;
  std::vector<PairReport> independence;
};

/// Aggregates persisted rows. Stuck rows are dropped unless the file (or the
/// override) says otherwise. Throws ParameterError when no usable rows
/// remain. Never modifies the input.
AnalysisReport analyze(const ResultFile& file, const AnalysisOptions& options = {});

nlohmann::json to_json(const AnalysisReport& report);
void write_text(const AnalysisReport& report, std::ostream& out);

/// CSV with columns trial_index, V0, ..., V{d-2}; empty cell for undefined.
void export_scaled_csv(const ResultFile& file, std::ostream& out);
/// CSV with columns ell, x, empirical_cdf, exp_cdf at each order statistic.
void export_ecdf_csv(const ResultFile& file, std::ostream& out, bool include_stuck = false);

}  // namespace dprocess

#endif  // DPROCESS_ANALYSIS_HPP_
