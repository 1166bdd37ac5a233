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

// dprocess: simulate, evaluate and verify the degree-constrained random
// graph process.
//
// Exit codes: 0 success, 2 parameter error, 3 I/O error, 4 domain/guard error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dprocess/analysis.hpp"
#include "dprocess/enumeration.hpp"
#include "dprocess/envelopes.hpp"
#include "dprocess/error.hpp"
#include "dprocess/experiment.hpp"
#include "dprocess/theory.hpp"
#include "dprocess/trajectory.hpp"

namespace {

using namespace dprocess;

constexpr int kExitOk = 0;
constexpr int kExitParameter = 2;
constexpr int kExitIo = 3;
constexpr int kExitDomain = 4;

// Opens `path` for writing, or returns std::cout for "" and "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw IoError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw IoError("write failed");
  }

 private:
  std::ofstream file_;
};

void print_vector(std::ostream& out, const std::vector<double>& v) {
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ']';
}

// ---------------------------------------------------------------- simulate

struct SimulateFlags {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t seed = 0;
  int checkpoints = 0;
  std::vector<std::uint64_t> schedule;
  std::string output;
  std::string format = "json";
};

int cmd_simulate(const SimulateFlags& f) {
  const ProcessParams params{f.n, f.d, f.seed};
  params.validate();
  std::vector<std::uint64_t> schedule = f.schedule;
  if (f.checkpoints > 0) {
    auto extra = log_spaced_schedule(params, f.checkpoints);
    schedule.insert(schedule.end(), extra.begin(), extra.end());
  }
  std::sort(schedule.begin(), schedule.end());
  schedule.erase(std::unique(schedule.begin(), schedule.end()), schedule.end());

  const TrajectoryRecord record = run(params, schedule);
  Output out(f.output);
  if (f.format == "json") {
    out.stream() << to_json(record).dump(2) << '\n';
  } else {
    auto& os = out.stream();
    os << "n=" << f.n << " d=" << f.d << " seed=" << f.seed << '\n'
       << "final_edges=" << record.final_edges << " of " << params.max_edges()
       << (record.stuck ? " (stuck)" : " (saturated)") << '\n';
    for (std::size_t l = 0; l < record.hitting_times.size(); ++l) {
      os << "T_" << l << " = ";
      if (record.hitting_times[l]) {
        os << *record.hitting_times[l] << "  V=" << std::setprecision(6)
           << scale_hitting_time(*record.hitting_times[l], static_cast<int>(l), f.n,
                                 static_cast<int>(f.d));
      } else {
        os << "never";
      }
      os << '\n';
    }
    for (const auto& c : record.checkpoints) {
      os << "i=" << c.step << " S=";
      for (std::size_t j = 0; j < c.s.size(); ++j) os << (j ? "," : "") << c.s[j];
      os << '\n';
    }
  }
  out.finish();
  return kExitOk;
}

// ------------------------------------------------------------------ theory

struct TheoryFlags {
  int d = 0;
  std::optional<double> t;
  std::optional<std::uint64_t> n;
  std::optional<double> i;
  int grid = 0;
  std::optional<double> t_max;
  std::string format = "text";
  std::string output;
};

nlohmann::json theory_json(const TheoryEval& ev) {
  return {{"t", ev.t},           {"u", ev.u},
          {"y", ev.y},           {"s", ev.s},
          {"residual_implicit", ev.residual_implicit},
          {"residual_sum", ev.residual_sum}};
}

int cmd_theory(const TheoryFlags& f) {
  Output out(f.output);
  auto& os = out.stream();
  os << std::setprecision(17);

  if (f.grid > 0) {
    // CSV of t, s_0..s_{d-1} on an even grid in [0, t_max].
    const double t_max = f.t_max.value_or(0.5 * f.d - 0.05);
    os << "t";
    for (int j = 0; j < f.d; ++j) os << ",s" << j;
    os << '\n';
    for (int g = 0; g < f.grid; ++g) {
      const double t = f.grid == 1 ? 0.0 : t_max * g / (f.grid - 1);
      const TheoryEval ev = eval_theory(f.d, t);
      os << t;
      for (double s : ev.s) os << ',' << s;
      os << '\n';
    }
    out.finish();
    return kExitOk;
  }

  nlohmann::json j;
  std::optional<StepTheory> at_step;
  TheoryEval ev;
  if (f.n && f.i) {
    at_step = eval_theory_at_step(*f.n, f.d, *f.i);
    ev = at_step->eval;
  } else if (f.t) {
    ev = eval_theory(f.d, *f.t);
  } else {
    throw ParameterError("theory: give --t, or --n together with --i");
  }
  j = theory_json(ev);
  if (at_step) {
    j["n"] = *f.n;
    j["i"] = *f.i;
    j["ns"] = at_step->ns;
  }
  if (f.n && f.d >= 2) {
    const PhaseBounds b = phase_bounds(*f.n, f.d);
    nlohmann::json bounds = {{"max_edges", b.max_edges}, {"i_trans", b.i_trans},
                             {"i_after", b.i_after},     {"i_before", b.i_before}};
    if (f.i) {
      const auto step = static_cast<std::int64_t>(std::floor(*f.i));
      if (step >= 0 && step <= b.i_trans) {
        bounds["E_first"] = envelope_first(*f.n, f.d, step);
      } else if (const auto k = b.phase_of(step)) {
        std::vector<double> e;
        for (int jj = *k; jj < f.d; ++jj) e.push_back(envelope_second(*f.n, f.d, jj, *k, step));
        bounds["phase"] = *k;
        bounds["E_second"] = e;
      }
    }
    j["phase_bounds"] = bounds;
  }

  if (f.format == "json") {
    os << j.dump(2) << '\n';
  } else if (f.format == "csv") {
    os << "t,u,residual_implicit,residual_sum";
    for (int jj = 0; jj < f.d; ++jj) os << ",y" << jj;
    for (int jj = 0; jj < f.d; ++jj) os << ",s" << jj;
    os << '\n' << ev.t << ',' << ev.u << ',' << ev.residual_implicit << ',' << ev.residual_sum;
    for (double y : ev.y) os << ',' << y;
    for (double s : ev.s) os << ',' << s;
    os << '\n';
  } else {
    os << "t        = " << ev.t << '\n'
       << "u        = " << ev.u << "   (y0 = e^-u)\n"
       << "y        = ";
    print_vector(os, ev.y);
    os << "\ns        = ";
    print_vector(os, ev.s);
    os << "\nresidual = " << ev.residual_implicit << " (implicit eq), " << ev.residual_sum
       << " (sum)\n";
    if (at_step) {
      os << "n*s      = ";
      print_vector(os, at_step->ns);
      os << '\n';
    }
    if (j.contains("phase_bounds")) os << "bounds   = " << j["phase_bounds"].dump() << '\n';
  }
  out.finish();
  return kExitOk;
}

// -------------------------------------------------------------- experiment

struct ExperimentFlags {
  std::string config_file;
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string output;
  int checkpoints = 64;
  bool no_phase_boundaries = false;
  std::vector<double> r_grid;
  bool include_stuck = false;
  unsigned threads = 0;
  bool quiet = false;
};

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParameterError(std::string("config is not valid JSON: ") + e.what());
  }
  static const std::vector<std::string> known = {
      "n", "d", "trials", "master_seed", "checkpoints", "r_grid", "exclude_stuck",
      "output", "threads"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParameterError("config: unknown key '" + key + "'");
    }
  }
  ExperimentConfig c;
  try {
    c.n = j.value("n", 0u);
    c.d = j.value("d", 0u);
    c.trials = j.value("trials", std::uint64_t{1});
    c.master_seed = j.value("master_seed", std::uint64_t{0});
    if (j.contains("checkpoints")) {
      c.checkpoints.log_spaced = j["checkpoints"].value("log_spaced", 64);
      c.checkpoints.phase_boundaries = j["checkpoints"].value("phase_boundaries", true);
    }
    if (j.contains("r_grid")) c.r_grid = j["r_grid"].get<std::vector<double>>();
    c.exclude_stuck = j.value("exclude_stuck", true);
    c.output = j.value("output", std::string());
    c.threads = j.value("threads", 0u);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("config: ") + e.what());
  }
  return c;
}

int cmd_experiment(const ExperimentFlags& f, const CLI::App& sub) {
  ExperimentConfig c;
  if (!f.config_file.empty()) c = load_config_file(f.config_file);
  auto given = [&](const char* name) { return sub.count(name) > 0; };
  if (given("--n")) c.n = f.n;
  if (given("--d")) c.d = f.d;
  if (given("--trials")) c.trials = f.trials;
  if (given("--seed")) c.master_seed = f.seed;
  if (given("--checkpoints")) c.checkpoints.log_spaced = f.checkpoints;
  if (given("--no-phase-boundaries")) c.checkpoints.phase_boundaries = false;
  if (given("--r-grid")) c.r_grid = f.r_grid;
  if (given("--include-stuck")) c.exclude_stuck = false;
  if (given("--threads")) c.threads = f.threads;
  if (given("--output")) c.output = f.output;
  if (c.output.empty()) {
    const char* dir = std::getenv("DPROCESS_OUTPUT_DIR");
    c.output = std::filesystem::path(dir ? dir : ".") /
               ("results_n" + std::to_string(c.n) + "_d" + std::to_string(c.d) + "_s" +
                std::to_string(c.master_seed) + ".jsonl");
  }
  c.validate();

  RunOptions options;
  if (!f.quiet) {
    options.progress = [](std::uint64_t done, std::uint64_t total) {
      if (done == total || done % 100 == 0) {
        std::cerr << "\rtrials " << done << "/" << total << std::flush;
      }
    };
  }
  const RunSummary s = run_experiment(c, options);
  if (!f.quiet) std::cerr << '\n';
  std::cout << "wrote " << s.new_rows << " rows (" << s.existing_rows << " already present) to "
            << c.output.string() << '\n';
  return kExitOk;
}

// ----------------------------------------------------------------- analyze

struct AnalyzeFlags {
  std::string input;
  std::string format = "text";
  std::string output;
  std::string export_v;
  std::string export_ecdf;
  double level = 0.01;
  int permutations = 999;
  std::uint64_t seed = 0;
  bool include_stuck = false;
};

int cmd_analyze(const AnalyzeFlags& f, const CLI::App& sub) {
  const ResultFile file = read_results(f.input);
  if (file.rows.empty()) throw ParameterError("analyze: input has no result rows");
  AnalysisOptions options;
  options.level = f.level;
  options.permutations = f.permutations;
  options.seed = f.seed;
  if (sub.count("--include-stuck")) options.include_stuck = true;
  const AnalysisReport report = analyze(file, options);

  Output out(f.output);
  if (f.format == "json") {
    out.stream() << to_json(report).dump(2) << '\n';
  } else {
    write_text(report, out.stream());
  }
  out.finish();
  if (!f.export_v.empty()) {
    Output csv(f.export_v);
    export_scaled_csv(file, csv.stream());
    csv.finish();
  }
  if (!f.export_ecdf.empty()) {
    Output csv(f.export_ecdf);
    export_ecdf_csv(file, csv.stream(), options.include_stuck.value_or(!file.config.exclude_stuck));
    csv.finish();
  }
  return kExitOk;
}

// ------------------------------------------------------------------ oracle

struct OracleFlags {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::string format = "text";
};

int cmd_oracle(const OracleFlags& f) {
  const ExactDistribution dist = exact_enumeration(f.n, f.d);
  if (f.format == "json") {
    std::cout << to_json(dist).dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "exact laws for n=" << f.n << " d=" << f.d << '\n';
  for (std::size_t l = 0; l < dist.hitting.size(); ++l) {
    for (const auto& [t, p] : dist.hitting[l]) {
      std::cout << "P[T_" << l << " = " << (t == kNever ? std::string("never") : std::to_string(t))
                << "] = " << p.str() << '\n';
    }
  }
  for (const auto& [e, p] : dist.final_edges) {
    std::cout << "P[final_edges = " << e << "] = " << p.str() << '\n';
  }
  std::cout << "P[stuck] = " << dist.stuck_probability.str() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degree-constrained random graph process toolkit"};
  app.require_subcommand(1);

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Run one process and print its record");
  simulate->add_option("--n", sim.n, "Vertex count")->required();
  simulate->add_option("--d", sim.d, "Degree cap")->required();
  simulate->add_option("--seed", sim.seed, "64-bit seed")->required();
  simulate->add_option("--checkpoints", sim.checkpoints, "Log-spaced checkpoint count");
  simulate->add_option("--schedule", sim.schedule, "Explicit checkpoint steps")->delimiter(',');
  simulate->add_option("--output,-o", sim.output, "Output file (default stdout)");
  simulate->add_option("--format", sim.format)->check(CLI::IsMember({"json", "text"}));

  TheoryFlags th;
  auto* theory = app.add_subcommand("theory", "Evaluate the approximating functions");
  theory->add_option("--d", th.d, "Degree cap")->required();
  theory->add_option("--t", th.t, "Scaled time t in [0, d/2)");
  theory->add_option("--n", th.n, "Vertex count (adds n*s and phase bounds)");
  theory->add_option("--i", th.i, "Step index, with --n");
  theory->add_option("--grid", th.grid, "Emit CSV of s on this many t points");
  theory->add_option("--t-max", th.t_max, "Upper end of the --grid range");
  theory->add_option("--format", th.format)->check(CLI::IsMember({"json", "csv", "text"}));
  theory->add_option("--output,-o", th.output, "Output file (default stdout)");

  ExperimentFlags ex;
  auto* experiment = app.add_subcommand("experiment", "Run and persist Monte Carlo trials");
  experiment->add_option("--config", ex.config_file, "JSON config file; flags override it");
  experiment->add_option("--n", ex.n, "Vertex count");
  experiment->add_option("--d", ex.d, "Degree cap");
  experiment->add_option("--trials", ex.trials, "Number of trials");
  experiment->add_option("--seed", ex.seed, "Master seed");
  experiment->add_option("--output,-o", ex.output,
                         "JSONL output (default $DPROCESS_OUTPUT_DIR/results_*.jsonl)");
  experiment->add_option("--checkpoints", ex.checkpoints, "Log-spaced checkpoints in [0, i_trans]");
  experiment->add_flag("--no-phase-boundaries", ex.no_phase_boundaries,
                       "Do not checkpoint at i_after(k), i_before(k)");
  experiment->add_option("--r-grid", ex.r_grid, "r values for zero probes")->delimiter(',');
  experiment->add_flag("--include-stuck", ex.include_stuck, "Keep stuck runs in statistics");
  experiment->add_option("--threads", ex.threads, "Worker threads (0 = all cores)");
  experiment->add_flag("--quiet,-q", ex.quiet, "No progress line");

  AnalyzeFlags an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Summarise a JSONL result file");
  analyze_cmd->add_option("--input,-i", an.input, "JSONL result file")->required();
  analyze_cmd->add_option("--format", an.format)->check(CLI::IsMember({"json", "text"}));
  analyze_cmd->add_option("--output,-o", an.output, "Report file (default stdout)");
  analyze_cmd->add_option("--export-v", an.export_v, "CSV of scaled hitting times");
  analyze_cmd->add_option("--export-ecdf", an.export_ecdf, "CSV of empirical CDFs");
  analyze_cmd->add_option("--level", an.level, "Significance level for independence tests");
  analyze_cmd->add_option("--permutations", an.permutations, "Permutation count");
  analyze_cmd->add_option("--seed", an.seed, "Permutation seed");
  analyze_cmd->add_flag("--include-stuck", an.include_stuck, "Keep stuck runs");

  OracleFlags orc;
  auto* oracle = app.add_subcommand("oracle", "Exact laws of a tiny instance by enumeration");
  oracle->add_option("--n", orc.n, "Vertex count (<= 8)")->required();
  oracle->add_option("--d", orc.d, "Degree cap (dn/2 <= 8)")->required();
  oracle->add_option("--format", orc.format)->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParameter;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*theory) return cmd_theory(th);
    if (*experiment) return cmd_experiment(ex, *experiment);
    if (*analyze_cmd) return cmd_analyze(an, *analyze_cmd);
    if (*oracle) return cmd_oracle(orc);
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitParameter;
}
