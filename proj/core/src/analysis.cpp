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

#include "dprocess/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>

#include "dprocess/error.hpp"

namespace dprocess {
namespace {

bool keep_row(const ResultRow& row, bool include_stuck) {
  return include_stuck || !row.stuck;
}

std::vector<double> defined_values(const std::vector<const ResultRow*>& rows, int ell) {
  std::vector<double> values;
  for (const ResultRow* row : rows) {
    const auto& v = row->scaled.at(static_cast<std::size_t>(ell));
    if (v) values.push_back(*v);
  }
  return values;
}

}  // namespace

AnalysisReport analyze(const ResultFile& file, const AnalysisOptions& options) {
  const bool include_stuck = options.include_stuck.value_or(!file.config.exclude_stuck);
  AnalysisReport report;
  report.n = file.config.n;
  report.d = file.config.d;
  report.rows = file.rows.size();

  std::vector<const ResultRow*> used;
  for (const ResultRow& row : file.rows) {
    if (row.stuck) ++report.stuck_rows;
    if (keep_row(row, include_stuck)) used.push_back(&row);
  }
  report.used_rows = used.size();
  if (used.empty()) throw ParameterError("analyze: no usable rows in input");

  const int d = static_cast<int>(report.d);
  const auto count = static_cast<double>(used.size());
  for (int l = 0; l + 2 <= d; ++l) {
    const auto values = defined_values(used, l);
    LevelSummary s;
    s.ell = l;
    s.samples = values.size();
    if (!values.empty()) {
      s.mean = mean(values);
      s.ks = ks_statistic(values, exp_cdf);
    }
    report.levels.push_back(s);
  }

  std::size_t first = 0;
  std::vector<std::size_t> second(d >= 2 ? d - 1 : 0, 0);
  for (const ResultRow* row : used) {
    first += row->first_phase_violations > 0;
    for (std::size_t k = 0; k < second.size() && k < row->second_phase_violations.size(); ++k) {
      second[k] += row->second_phase_violations[k] > 0;
    }
  }
  report.first_phase_violation_rate = first / count;
  for (std::size_t v : second) report.second_phase_violation_rate.push_back(v / count);

  // Probe frequencies, per (r, l) and jointly over all l at the same r.
  std::map<std::pair<double, int>, std::size_t> hits;
  std::map<double, std::size_t> joint_hits;
  for (const ResultRow* row : used) {
    std::map<double, bool> all_zero;
    for (const ZeroProbe& p : row->zero_probes) {
      hits[{p.r, p.ell}] += p.zero;
      auto [it, inserted] = all_zero.emplace(p.r, true);
      it->second = it->second && p.zero;
    }
    for (const auto& [r, z] : all_zero) joint_hits[r] += z;
  }
  for (const auto& [key, h] : hits) {
    report.probes.push_back({key.first, key.second, used.size(), h / count,
                             std::exp(-key.first)});
  }
  if (d > 2) {
    for (const auto& [r, h] : joint_hits) {
      report.probes.push_back({r, -1, used.size(), h / count, std::exp(-(d - 1) * r)});
    }
  }

  for (int a = 0; a + 2 <= d; ++a) {
    for (int b = a + 1; b + 2 <= d; ++b) {
      std::vector<double> x, y;
      for (const ResultRow* row : used) {
        const auto& va = row->scaled.at(static_cast<std::size_t>(a));
        const auto& vb = row->scaled.at(static_cast<std::size_t>(b));
        if (va && vb) {
          x.push_back(*va);
          y.push_back(*vb);
        }
      }
      if (x.size() < 50) continue;
      IndependenceOptions io;
      io.level = options.level;
      io.permutations = options.permutations;
      io.seed = options.seed;
      report.independence.push_back({a, b, independence_report(x, y, io)});
    }
  }
  return report;
}

nlohmann::json to_json(const AnalysisReport& report) {
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : report.levels) {
    levels.push_back({{"ell", l.ell}, {"samples", l.samples}, {"mean_V", l.mean},
                      {"ks_vs_exp1", l.ks}});
  }
  nlohmann::json probes = nlohmann::json::array();
  for (const auto& p : report.probes) {
    probes.push_back({{"r", p.r},
                      {"ell", p.ell < 0 ? nlohmann::json("all") : nlohmann::json(p.ell)},
                      {"samples", p.samples},
                      {"frequency", p.frequency},
                      {"expected", p.expected}});
  }
  nlohmann::json independence = nlohmann::json::array();
  for (const auto& p : report.independence) {
    nlohmann::json j = to_json(p.report);
    j["ell_a"] = p.ell_a;
    j["ell_b"] = p.ell_b;
    independence.push_back(j);
  }
  return {{"n", report.n},
          {"d", report.d},
          {"rows", report.rows},
          {"stuck_rows", report.stuck_rows},
          {"used_rows", report.used_rows},
          {"levels", levels},
          {"envelope_violation_rate",
           {{"first", report.first_phase_violation_rate},
            {"second", report.second_phase_violation_rate}}},
          {"probes", probes},
          {"independence", independence}};
}

void write_text(const AnalysisReport& report, std::ostream& out) {
  out << "n=" << report.n << " d=" << report.d << "  rows=" << report.rows
      << " stuck=" << report.stuck_rows << " used=" << report.used_rows << "\n\n";
  out << std::fixed << std::setprecision(4);
  out << "scaled hitting times V^(l) vs Exp(1)\n";
  for (const auto& l : report.levels) {
    out << "  l=" << l.ell << "  samples=" << l.samples << "  mean=" << l.mean
        << "  KS=" << l.ks << '\n';
  }
  out << "\nenvelope violation rate (runs)\n  first: " << report.first_phase_violation_rate
      << '\n';
  for (std::size_t k = 0; k < report.second_phase_violation_rate.size(); ++k) {
    out << "  I_" << k << ":   " << report.second_phase_violation_rate[k] << '\n';
  }
  out << "\nzero probes P[T_l <= i(r,l)]\n";
  for (const auto& p : report.probes) {
    out << "  r=" << p.r << "  l=" << (p.ell < 0 ? std::string("all") : std::to_string(p.ell))
        << "  freq=" << p.frequency << "  expected=" << p.expected << '\n';
  }
  if (!report.independence.empty()) out << "\npairwise independence\n";
  for (const auto& p : report.independence) {
    out << "  (V" << p.ell_a << ", V" << p.ell_b << ")  r=" << p.report.correlation.statistic
        << " p=" << p.report.correlation.threshold_or_pvalue
        << "  D=" << p.report.joint_cdf.statistic
        << " p=" << p.report.joint_cdf.threshold_or_pvalue
        << "  " << (p.report.pass ? "pass" : "FAIL") << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void export_scaled_csv(const ResultFile& file, std::ostream& out) {
  const int levels = file.config.d >= 2 ? static_cast<int>(file.config.d) - 1 : 0;
  out << "trial_index,stuck";
  for (int l = 0; l < levels; ++l) out << ",V" << l;
  out << '\n' << std::setprecision(17);
  for (const auto& row : file.rows) {
    out << row.trial_index << ',' << (row.stuck ? 1 : 0);
    for (const auto& v : row.scaled) {
      out << ',';
      if (v) out << *v;
    }
    out << '\n';
  }
}

void export_ecdf_csv(const ResultFile& file, std::ostream& out, bool include_stuck) {
  out << "ell,x,empirical_cdf,exp_cdf\n" << std::setprecision(17);
  std::vector<const ResultRow*> used;
  for (const auto& row : file.rows) {
    if (keep_row(row, include_stuck)) used.push_back(&row);
  }
  for (int l = 0; l + 2 <= static_cast<int>(file.config.d); ++l) {
    auto values = defined_values(used, l);
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size(); ++i) {
      out << l << ',' << values[i] << ','
          << static_cast<double>(i + 1) / values.size() << ',' << exp_cdf(values[i]) << '\n';
    }
  }
}

}  // namespace dprocess
