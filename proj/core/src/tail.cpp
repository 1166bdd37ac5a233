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

#include "dprocess/tail.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dprocess/envelopes.hpp"
#include "dprocess/error.hpp"
#include "dprocess/trajectory.hpp"

namespace dprocess {

std::uint64_t TailSequence::ones() const { return ones_in_prefix(bits.size()); }

std::uint64_t TailSequence::ones_in_prefix(std::size_t length) const {
  length = std::min(length, bits.size());
  return std::accumulate(bits.begin(), bits.begin() + static_cast<std::ptrdiff_t>(length),
                         std::uint64_t{0});
}

TailSequence extract_tail_sequence(const ProcessParams& params, int k) {
  Process process(params);
  return extract_tail_sequence(process, params.seed, k);
}

TailSequence extract_tail_sequence(Process& process, std::uint64_t seed, int k) {
  const ProcessParams& params = process.params();
  const int d = static_cast<int>(params.d);
  if (k < 0 || k > d - 2) throw ParameterError("tail sequence: k must be in [0, d-2]");
  const PhaseBounds bounds = phase_bounds(params.n, d);
  const std::int64_t start = bounds.i_before[k];
  if (start < 0) throw DomainError("tail sequence: i_before(k) is negative for this n");

  TailSequence seq;
  seq.k = k;
  seq.n = params.n;
  seq.d = d;
  seq.seed = seed;
  seq.t_start = start;
  seq.J = params.max_edges() - static_cast<std::uint64_t>(start);
  seq.bits.reserve(2 * seq.J);

  process.reset(seed);
  auto capture_start = [&] {
    const auto s = process.s_counts();
    seq.L = s[k];
    seq.below_k_at_start = k > 0 ? s[k - 1] : 0;
  };
  if (start == 0) capture_start();
  while (!process.finished()) {
    const auto before = static_cast<std::int64_t>(process.steps());
    const StepEvent event = process.step();
    if (!event.added()) break;
    if (before >= start) {
      seq.bits.push_back(event.deg_u_before == static_cast<std::uint32_t>(k));
      seq.bits.push_back(event.deg_v_before == static_cast<std::uint32_t>(k));
    }
    if (before + 1 == start) capture_start();
  }
  if (static_cast<std::int64_t>(process.steps()) < start) {
    throw DomainError("tail sequence: run got stuck before i_before(k)");
  }
  seq.t_end = static_cast<std::int64_t>(process.steps());
  return seq;
}

double binomial_ratio(std::uint64_t a, std::uint64_t b, std::uint64_t L) {
  if (a > b) throw ParameterError("binomial_ratio: need a <= b");
  if (a < L) return 0.0;
  double log_ratio = 0.0;
  for (std::uint64_t i = 0; i < L; ++i) {
    log_ratio += std::log(static_cast<double>(a - i)) - std::log(static_cast<double>(b - i));
  }
  return std::exp(log_ratio);
}

namespace {

// t_end - t_start with t_end = floor(dn/2 - r J / L), clamped at 0.
std::uint64_t window_steps(const TailSequence& seq, double r) {
  const double half_dn = 0.5 * static_cast<double>(seq.d) * static_cast<double>(seq.n);
  const double t_end =
      std::floor(half_dn - r * static_cast<double>(seq.J) / static_cast<double>(seq.L));
  const double steps = t_end - static_cast<double>(seq.t_start);
  return steps <= 0.0 ? 0 : static_cast<std::uint64_t>(steps);
}

}  // namespace

double tail_q_prediction(std::uint64_t L, std::uint64_t J, double r) {
  if (L == 0) throw ParameterError("tail_q_prediction: L must be positive");
  if (!(r >= 0.0)) throw ParameterError("tail_q_prediction: r must be non-negative");
  const auto removed = static_cast<std::uint64_t>(
      std::floor(r * static_cast<double>(J) / static_cast<double>(L)));
  if (removed >= J) return 0.0;
  return binomial_ratio(2 * (J - removed), 2 * J, L);
}

double TailLawReport::max_gap() const {
  return std::max({gap_empirical_q, gap_empirical_exp, gap_q_exp});
}

TestReport TailLawReport::as_test(double tolerance) const {
  TestReport t;
  t.method = "tail_law";
  t.statistic = max_gap();
  t.threshold_or_pvalue = tolerance;
  t.level = tolerance;
  t.pass = t.statistic <= tolerance;
  t.n_samples = sequences;
  return t;
}

TailLawReport tail_law_report(std::span<const TailSequence> sequences, double r) {
  if (sequences.empty()) throw ParameterError("tail_law_report: no sequences");
  if (!(r > 0.0)) throw ParameterError("tail_law_report: r must be positive");
  TailLawReport report;
  report.r = r;
  report.sequences = sequences.size();
  report.exp_r = std::exp(-r);
  std::size_t hits = 0;
  double q_sum = 0.0;
  for (const TailSequence& seq : sequences) {
    if (seq.L == 0) throw ParameterError("tail_law_report: sequence with L = 0");
    const std::uint64_t steps = std::min(window_steps(seq, r), seq.J);
    if (seq.ones_in_prefix(2 * steps) == seq.L) ++hits;
    q_sum += binomial_ratio(2 * steps, 2 * seq.J, seq.L);
  }
  report.empirical = static_cast<double>(hits) / sequences.size();
  report.q_model = q_sum / sequences.size();
  report.gap_empirical_q = std::abs(report.empirical - report.q_model);
  report.gap_empirical_exp = std::abs(report.empirical - report.exp_r);
  report.gap_q_exp = std::abs(report.q_model - report.exp_r);
  return report;
}

nlohmann::json to_json(const TailLawReport& report) {
  return {{"r", report.r},
          {"sequences", report.sequences},
          {"empirical", report.empirical},
          {"q_model", report.q_model},
          {"exp_r", report.exp_r},
          {"gap_empirical_q", report.gap_empirical_q},
          {"gap_empirical_exp", report.gap_empirical_exp},
          {"gap_q_exp", report.gap_q_exp}};
}

}  // namespace dprocess
