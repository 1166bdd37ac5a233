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

#include "dprocess/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dprocess/audit.hpp"
#include "dprocess/envelopes.hpp"
#include "dprocess/error.hpp"
#include "dprocess/rng.hpp"

namespace dprocess {

void ExperimentConfig::validate() const {
  ProcessParams{n, d, master_seed}.validate();
  if (trials < 1) throw ParameterError("experiment: trials must be at least 1");
  if (checkpoints.log_spaced < 0) {
    throw ParameterError("experiment: checkpoint count must be non-negative");
  }
  for (double r : r_grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw ParameterError("experiment: r-grid values must be finite and >= 0");
    }
  }
}

nlohmann::json ExperimentConfig::semantic_json() const {
  return {{"n", n},
          {"d", d},
          {"master_seed", master_seed},
          {"checkpoints",
           {{"log_spaced", checkpoints.log_spaced},
            {"phase_boundaries", checkpoints.phase_boundaries}}},
          {"r_grid", r_grid},
          {"exclude_stuck", exclude_stuck}};
}

std::string ExperimentConfig::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : semantic_json().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json j = config.semantic_json();
  j["trials"] = config.trials;
  return j;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    c.n = j.at("n").get<std::uint32_t>();
    c.d = j.at("d").get<std::uint32_t>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.trials = j.value("trials", std::uint64_t{1});
    const auto& cp = j.at("checkpoints");
    c.checkpoints.log_spaced = cp.at("log_spaced").get<int>();
    c.checkpoints.phase_boundaries = cp.at("phase_boundaries").get<bool>();
    c.r_grid = j.at("r_grid").get<std::vector<double>>();
    c.exclude_stuck = j.at("exclude_stuck").get<bool>();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed experiment config: ") + e.what());
  }
}

nlohmann::json to_json(const ResultRow& row) {
  nlohmann::json hitting = nlohmann::json::array();
  for (const auto& t : row.hitting_times) {
    hitting.push_back(t ? nlohmann::json(*t) : nlohmann::json(nullptr));
  }
  nlohmann::json scaled = nlohmann::json::array();
  for (const auto& v : row.scaled) {
    scaled.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
  }
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : row.zero_probes) {
    probes.push_back({{"r", p.r}, {"ell", p.ell}, {"zero", p.zero}});
  }
  return {{"type", "row"},
          {"trial_index", row.trial_index},
          {"trial_seed", row.trial_seed},
          {"T", hitting},
          {"V", scaled},
          {"final_edges", row.final_edges},
          {"stuck", row.stuck},
          {"envelope_violations",
           {{"first", row.first_phase_violations},
            {"second", row.second_phase_violations}}},
          {"first_phase_max_normalized", row.first_phase_max_normalized},
          {"zero_at_i_of_r", probes}};
}

ResultRow result_row_from_json(const nlohmann::json& j) {
  try {
    if (j.at("type") != "row") throw IoError("expected a row record");
    ResultRow row;
    row.trial_index = j.at("trial_index").get<std::uint64_t>();
    row.trial_seed = j.at("trial_seed").get<std::uint64_t>();
    for (const auto& t : j.at("T")) {
      row.hitting_times.push_back(
          t.is_null() ? std::nullopt : std::optional<std::uint64_t>(t.get<std::uint64_t>()));
    }
    for (const auto& v : j.at("V")) {
      row.scaled.push_back(v.is_null() ? std::nullopt
                                       : std::optional<double>(v.get<double>()));
    }
    row.final_edges = j.at("final_edges").get<std::uint64_t>();
    row.stuck = j.at("stuck").get<bool>();
    const auto& ev = j.at("envelope_violations");
    row.first_phase_violations = ev.at("first").get<std::uint64_t>();
    row.second_phase_violations = ev.at("second").get<std::vector<std::uint64_t>>();
    row.first_phase_max_normalized = j.at("first_phase_max_normalized").get<double>();
    for (const auto& p : j.at("zero_at_i_of_r")) {
      row.zero_probes.push_back(
          {p.at("r").get<double>(), p.at("ell").get<int>(), p.at("zero").get<bool>()});
    }
    return row;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed result row: ") + e.what());
  }
}

double scale_hitting_time(std::uint64_t T, int ell, std::uint64_t n, int d) {
  if (d < 2 || ell < 0 || ell > d - 2) {
    throw ParameterError("scale_hitting_time: need 0 <= l <= d-2");
  }
  const double dn = static_cast<double>(d) * static_cast<double>(n);
  const double twice_t = 2.0 * static_cast<double>(T);
  if (twice_t > dn) throw ParameterError("scale_hitting_time: T exceeds dn/2");
  const double log_factor =
      std::lgamma(static_cast<double>(d)) - std::lgamma(ell + 1.0) -
      (d - 1 - ell) * std::log(std::log(static_cast<double>(n)));
  return (dn - twice_t) * std::exp(log_factor);
}

bool probe_zero_at(const TrajectoryRecord& record, double r, int ell) {
  const int d = static_cast<int>(record.params.d);
  const double probe = std::floor(i_of_r(record.params.n, d, r, ell));
  const auto& t = record.hitting_times.at(static_cast<std::size_t>(ell));
  return t && static_cast<double>(*t) <= probe;
}

std::vector<std::uint64_t> checkpoint_schedule(const ExperimentConfig& config) {
  const ProcessParams params{config.n, config.d, config.master_seed};
  std::vector<std::uint64_t> steps;
  if (config.d < 2) {
    steps = log_spaced_schedule(params, config.checkpoints.log_spaced);
    return steps;
  }
  const PhaseBounds bounds = phase_bounds(config.n, static_cast<int>(config.d));
  if (bounds.i_trans >= 0) {
    steps = log_spaced_schedule(params, 0, static_cast<std::uint64_t>(bounds.i_trans),
                                config.checkpoints.log_spaced);
  }
  if (config.checkpoints.phase_boundaries) {
    for (const auto& list : {bounds.i_after, bounds.i_before}) {
      for (std::int64_t b : list) {
        if (b >= 0 && b < bounds.max_edges) steps.push_back(static_cast<std::uint64_t>(b));
      }
    }
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

namespace {

ResultRow make_row(const ExperimentConfig& config, std::uint64_t trial_index,
                   Process& scratch, const std::vector<std::uint64_t>& schedule) {
  const int d = static_cast<int>(config.d);
  ResultRow row;
  row.trial_index = trial_index;
  row.trial_seed = trial_seed(config.master_seed, trial_index);
  const TrajectoryRecord record = run(scratch, row.trial_seed, schedule);
  row.hitting_times = record.hitting_times;
  row.final_edges = record.final_edges;
  row.stuck = record.stuck;
  for (std::size_t l = 0; l < record.hitting_times.size(); ++l) {
    const auto& t = record.hitting_times[l];
    row.scaled.push_back(t ? std::optional<double>(scale_hitting_time(
                                 *t, static_cast<int>(l), config.n, d))
                           : std::nullopt);
  }
  if (d >= 2) {
    const AuditSummary first = audit_trajectory(record, AuditMode::kFirst);
    row.first_phase_violations = first.violations_in_phase(-1);
    row.first_phase_max_normalized = first.max_normalized();
    const AuditSummary second = audit_trajectory(record, AuditMode::kSecond);
    for (int k = 0; k + 2 <= d; ++k) {
      row.second_phase_violations.push_back(second.violations_in_phase(k));
    }
    for (double r : config.r_grid) {
      for (int l = 0; l + 2 <= d; ++l) {
        row.zero_probes.push_back({r, l, probe_zero_at(record, r, l)});
      }
    }
  }
  return row;
}

// Drops a trailing partial line; returns complete lines.
std::vector<std::string> load_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (true) {
    const std::size_t nl = content.find('\n', start);
    if (nl == std::string::npos) break;
    lines.push_back(content.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

void check_header(const nlohmann::json& header) {
  if (!header.is_object() || header.value("type", "") != "header" ||
      header.value("schema", "") != kResultSchema) {
    throw IoError("result file has no dprocess header");
  }
  const std::string version = header.value("version", "");
  const std::string expected = kResultSchemaVersion;
  if (version.substr(0, version.find('.')) != expected.substr(0, expected.find('.'))) {
    throw IoError("result schema version " + version + " is incompatible with " + expected);
  }
}

nlohmann::json parse_line(const std::string& line, const std::filesystem::path& path) {
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw IoError("malformed JSON line in " + path.string());
  }
}

}  // namespace

ResultRow run_trial(const ExperimentConfig& config, std::uint64_t trial_index,
                    Process& scratch) {
  return make_row(config, trial_index, scratch, checkpoint_schedule(config));
}

ResultRow run_trial(const ExperimentConfig& config, std::uint64_t trial_index) {
  Process scratch({config.n, config.d, config.master_seed});
  return run_trial(config, trial_index, scratch);
}

ResultFile read_results(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  const auto lines = load_lines(path);
  if (lines.empty()) throw IoError("empty result file: " + path.string());
  ResultFile file;
  file.header = parse_line(lines.front(), path);
  check_header(file.header);
  file.config = experiment_config_from_json(file.header.at("config"));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    file.rows.push_back(result_row_from_json(parse_line(lines[i], path)));
  }
  return file;
}

RunSummary run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  if (config.output.empty()) throw IoError("experiment: no output path");
  const std::string hash = config.hash();
  RunSummary summary;

  std::uint64_t next_index = 0;
  if (std::filesystem::exists(config.output)) {
    auto lines = load_lines(config.output);
    if (lines.empty()) {
      throw IoError("existing file has no header: " + config.output.string());
    }
    const nlohmann::json header = parse_line(lines.front(), config.output);
    check_header(header);
    if (header.value("config_hash", "") != hash) {
      throw IoError("config hash mismatch: " + config.output.string() +
                    " was written by a different configuration");
    }
    // Rows are written in trial order, so the file holds 0..m-1. A row that
    // fails to parse can only be an interrupted final write.
    std::uintmax_t good_bytes = lines.front().size() + 1;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(lines[i]);
      } catch (const nlohmann::json::parse_error&) {
        if (i + 1 != lines.size()) throw IoError("corrupt row in " + config.output.string());
        break;
      }
      if (result_row_from_json(j).trial_index != next_index) {
        throw IoError("rows out of order in " + config.output.string());
      }
      ++next_index;
      good_bytes += lines[i].size() + 1;
    }
    std::filesystem::resize_file(config.output, good_bytes);
    summary.existing_rows = next_index;
  } else {
    if (config.output.has_parent_path()) {
      std::filesystem::create_directories(config.output.parent_path());
    }
    std::ofstream out(config.output, std::ios::binary);
    if (!out) throw IoError("cannot create " + config.output.string());
    const nlohmann::json header = {{"type", "header"},
                                   {"schema", kResultSchema},
                                   {"version", kResultSchemaVersion},
                                   {"config", to_json(config)},
                                   {"config_hash", hash}};
    out << header.dump() << '\n';
    if (!out) throw IoError("write failed: " + config.output.string());
  }

  std::uint64_t end_index = config.trials;
  if (options.max_new_rows) {
    end_index = std::min(end_index, next_index + *options.max_new_rows);
  }
  if (next_index >= end_index) return summary;

  std::ofstream out(config.output, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + config.output.string());

  const auto schedule = checkpoint_schedule(config);
  unsigned threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(end_index - next_index)));

  auto write_row = [&](const ResultRow& row) {
    out << to_json(row).dump() << '\n';
    out.flush();
    if (!out) throw IoError("write failed: " + config.output.string());
    ++summary.new_rows;
    if (options.progress) options.progress(row.trial_index + 1, config.trials);
  };

  if (threads == 1) {
    Process scratch({config.n, config.d, config.master_seed});
    for (std::uint64_t i = next_index; i < end_index; ++i) {
      write_row(make_row(config, i, scratch, schedule));
    }
    return summary;
  }

  // Workers compute rows out of order; this thread writes them in order.
  std::atomic<std::uint64_t> cursor{next_index};
  std::atomic<bool> abort{false};
  std::mutex mutex;
  std::condition_variable ready;
  std::map<std::uint64_t, ResultRow> pending;
  std::exception_ptr worker_error;

  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      try {
        Process scratch({config.n, config.d, config.master_seed});
        for (std::uint64_t i = cursor++; i < end_index && !abort; i = cursor++) {
          ResultRow row = make_row(config, i, scratch, schedule);
          std::lock_guard lock(mutex);
          pending.emplace(i, std::move(row));
          ready.notify_one();
        }
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!worker_error) worker_error = std::current_exception();
        abort = true;
        ready.notify_one();
      }
    });
  }

  try {
    for (std::uint64_t i = next_index; i < end_index; ++i) {
      ResultRow row;
      {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return pending.count(i) > 0 || worker_error; });
        if (worker_error) std::rethrow_exception(worker_error);
        row = std::move(pending.at(i));
        pending.erase(i);
      }
      write_row(row);
    }
  } catch (...) {
    abort = true;
    throw;
  }
  return summary;
}

}  // namespace dprocess
