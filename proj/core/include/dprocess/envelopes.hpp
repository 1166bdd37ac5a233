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

#ifndef DPROCESS_ENVELOPES_HPP_
#define DPROCESS_ENVELOPES_HPP_

#include <cstdint>
#include <optional>
#include <vector>

namespace dprocess {

/// Step thresholds that split a run into analysis phases.
///
///   i_trans      = floor(dn/2 - n^{1 - 1/(100d)})
///   i_after(k)   = floor(dn/2 - ln(n)^{d - 1.01 - k})
///   i_before(k)  = floor(dn/2 - ln(n)^{d - 0.8 - k})
///
/// Phase "first" is [0, i_trans]. Phase I_0 is [i_trans + 1, i_after(0)] and
/// I_k is [i_after(k-1) + 1, i_after(k)] for k = 1..d-2. For small n some of
/// these may be empty or out of order; callers check with phase_of().
struct PhaseBounds {
  std::uint64_t n = 0;
  int d = 0;
  std::int64_t max_edges = 0;
  std::int64_t i_trans = 0;
  std::vector<std::int64_t> i_after;
  std::vector<std::int64_t> i_before;

  /// Phase index k with i in I_k, or nullopt when i is in the first phase or
  /// past i_after(d-2).
  std::optional<int> phase_of(std::int64_t i) const;
  /// True when i_trans < i_after(0) < ... < i_after(d-2) <= floor(dn/2).
  bool ordered() const;
};

/// Throws ParameterError unless n >= 2 and 2 <= d < n.
PhaseBounds phase_bounds(std::uint64_t n, int d);

/// n^0.6 * (dn / (dn - 2i))^{4d}, for 0 <= i <= i_trans.
double envelope_first(std::uint64_t n, int d, std::int64_t i);

/// E_{j,k}(i) = 2^k ln(n)^0.05 (n s_j(i/n))^0.7, for k <= j <= d-1 and i in I_k.
double envelope_second(std::uint64_t n, int d, int j, int k, std::int64_t i);

/// Same formula without the phase-membership check (still k <= j <= d-1 and
/// 0 <= i < dn/2). Used for plotting and closed-form comparisons.
double envelope_second_unchecked(std::uint64_t n, int d, int j, int k, double i);

/// Closed-form order of E_j(i): ln(n)^{-0.7d + 0.75 + 0.7j} (dn/2 - i)^0.7.
double envelope_second_order(std::uint64_t n, int d, int j, double i);

/// i(r, l) = dn/2 - (l! / (2 (d-1)!)) r ln(n)^{d-1-l}, for r >= 0 and
/// 0 <= l <= d-2. The step at which P[S^(l) = 0] approaches e^{-r}.
double i_of_r(std::uint64_t n, int d, double r, int ell);

}  // namespace dprocess

#endif  // DPROCESS_ENVELOPES_HPP_
