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

#ifndef DPROCESS_EXPERIMENT_HPP_
#define DPROCESS_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprocess/process.hpp"
#include "dprocess/trajectory.hpp"

namespace dprocess {

/// Version of the JSON-lines result schema. Bump the major component on any
/// change that alters the meaning of an existing field.
inline constexpr const char* kResultSchema = "dprocess.results";
inline constexpr const char* kResultSchemaVersion = "1.0.0";

struct CheckpointPolicy {
  /// Log-spaced checkpoints in [0, i_trans].
  int log_spaced = 64;
  /// Also checkpoint at every i_after(k) and i_before(k).
  bool phase_boundaries = true;
};

struct ExperimentConfig {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t trials = 1;
  std::uint64_t master_seed = 0;
  CheckpointPolicy checkpoints;
  std::vector<double> r_grid{0.25, 0.5, 1.0, 2.0};
  bool exclude_stuck = true;
  std::filesystem::path output;
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;

  /// Throws ParameterError on invalid values.
  void validate() const;
  /// Fields that determine row contents. `trials`, `output` and `threads`
  /// are excluded so a file can be resumed with more trials or threads.
  nlohmann::json semantic_json() const;
  /// FNV-1a 64 of semantic_json().dump(), as 16 hex digits.
  std::string hash() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct ZeroProbe {
  double r = 0.0;
  int ell = 0;
  bool zero = false;

  bool operator==(const ZeroProbe&) const = default;
};

struct ResultRow {
  std::uint64_t trial_index = 0;
  std::uint64_t trial_seed = 0;
  std::vector<std::optional<std::uint64_t>> hitting_times;
  std::vector<std::optional<double>> scaled;  // V^(l)
  std::uint64_t final_edges = 0;
  bool stuck = false;
  std::uint64_t first_phase_violations = 0;
  std::vector<std::uint64_t> second_phase_violations;  // per k
  double first_phase_max_normalized = 0.0;
  std::vector<ZeroProbe> zero_probes;

  bool operator==(const ResultRow&) const = default;
};

nlohmann::json to_json(const ResultRow& row);
ResultRow result_row_from_json(const nlohmann::json& j);

/// V^(l) = (d-1)! (dn - 2T) / (l! ln(n)^{d-1-l}).
/// Throws ParameterError unless 0 <= T <= dn/2 and 0 <= l <= d-2.
double scale_hitting_time(std::uint64_t T, int ell, std::uint64_t n, int d);

/// True iff T_l <= floor(i(r, l)); false when T_l was never reached.
bool probe_zero_at(const TrajectoryRecord& record, double r, int ell);

/// Checkpoint steps implied by the policy, sorted and unique.
std::vector<std::uint64_t> checkpoint_schedule(const ExperimentConfig& config);

/// Computes one row. Pure function of (config, trial_index); `scratch` only
/// provides buffers.
ResultRow run_trial(const ExperimentConfig& config, std::uint64_t trial_index,
                    Process& scratch);
ResultRow run_trial(const ExperimentConfig& config, std::uint64_t trial_index);

struct RunOptions {
  /// Stop after persisting this many new rows (simulates interruption).
  std::optional<std::uint64_t> max_new_rows;
  /// Called from the writer after each persisted row.
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
};

struct RunSummary {
  std::uint64_t existing_rows = 0;
  std::uint64_t new_rows = 0;
};

/// Executes trials [0, config.trials) and appends rows, in trial order, to
/// config.output (JSON lines; first line is a header with the config and its
/// hash). If the file exists its header must match config.hash(); rows
/// already present are skipped and a partial trailing line is discarded.
/// Throws IoError on I/O failure or header mismatch.
RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct ResultFile {
  nlohmann::json header;
  ExperimentConfig config;
  std::vector<ResultRow> rows;
};

/// Reads and validates a result file. Throws IoError on missing file,
/// missing/unknown header, schema major-version mismatch or malformed rows.
ResultFile read_results(const std::filesystem::path& path);

}  // namespace dprocess

#endif  // DPROCESS_EXPERIMENT_HPP_
