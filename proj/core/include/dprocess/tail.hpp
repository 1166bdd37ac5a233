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

#ifndef DPROCESS_TAIL_HPP_
#define DPROCESS_TAIL_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "dprocess/process.hpp"
#include "dprocess/stats.hpp"

namespace dprocess {

/// Binary trace of the last steps of a run. For every step in
/// [t_start, t_end) both picked vertices are visited in the order the pair
/// was emitted; each contributes a 1 iff its degree was exactly k just before
/// the step.
struct TailSequence {
  int k = 0;
  std::uint64_t n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::int64_t t_start = 0;  // i_before(k)
  std::int64_t t_end = 0;    // last step reached (floor(dn/2) if saturated)
  std::vector<std::uint8_t> bits;
  std::uint64_t L = 0;  // S^(k) at t_start
  std::uint64_t J = 0;  // floor(dn/2) - t_start
  std::uint64_t below_k_at_start = 0;  // S^(k-1) at t_start; 0 for k = 0

  std::uint64_t ones() const;
  /// Number of 1s among the first `length` bits.
  std::uint64_t ones_in_prefix(std::size_t length) const;
};

/// Runs the process with `params` and records the tail sequence for degree
/// k in 0..d-2. Throws DomainError if the run gets stuck before i_before(k)
/// or i_before(k) < 0.
TailSequence extract_tail_sequence(const ProcessParams& params, int k);

/// Same, reusing a process buffer.
TailSequence extract_tail_sequence(Process& process, std::uint64_t seed, int k);

/// C(a, L) / C(b, L) for a <= b; 0 when a < L.
double binomial_ratio(std::uint64_t a, std::uint64_t b, std::uint64_t L);

/// Three estimates of P[S^(k) = 0 at floor(dn/2 - r J / L)]:
///   empirical  - fraction of sequences whose first 2(t_end - t_start) bits
///                already contain all L ones,
///   q_model    - mean over sequences of C(2(t_end - t_start), L) / C(2J, L),
///   exp_r      - e^{-r}.
struct TailLawReport {
  double r = 0.0;
  std::size_t sequences = 0;
  double empirical = 0.0;
  double q_model = 0.0;
  double exp_r = 0.0;
  double gap_empirical_q = 0.0;
  double gap_empirical_exp = 0.0;
  double gap_q_exp = 0.0;

  double max_gap() const;
  /// statistic = max pairwise gap, threshold = tolerance.
  TestReport as_test(double tolerance) const;
};

/// Throws ParameterError on empty input, r <= 0, or any sequence with L = 0.
TailLawReport tail_law_report(std::span<const TailSequence> sequences, double r);

/// q_model for a single synthetic (L, J): C(2J - 2 floor(rJ/L), L) / C(2J, L).
double tail_q_prediction(std::uint64_t L, std::uint64_t J, double r);

nlohmann::json to_json(const TailLawReport& report);

}  // namespace dprocess

#endif  // DPROCESS_TAIL_HPP_
