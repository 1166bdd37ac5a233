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

#include "dprocess/envelopes.hpp"

#include <cmath>
#include <string>

#include "dprocess/error.hpp"
#include "dprocess/theory.hpp"

namespace dprocess {
namespace {

void check_instance(std::uint64_t n, int d) {
  if (n < 2 || d < 2 || static_cast<std::uint64_t>(d) >= n) {
    throw ParameterError("phase bounds need n >= 2 and 2 <= d < n");
  }
}

double half_dn(std::uint64_t n, int d) {
  return 0.5 * static_cast<double>(d) * static_cast<double>(n);
}

}  // namespace

PhaseBounds phase_bounds(std::uint64_t n, int d) {
  check_instance(n, d);
  const double ln_n = std::log(static_cast<double>(n));
  const double half = half_dn(n, d);
  PhaseBounds b;
  b.n = n;
  b.d = d;
  b.max_edges = static_cast<std::int64_t>(static_cast<std::uint64_t>(d) * n / 2);
  b.i_trans = static_cast<std::int64_t>(
      std::floor(half - std::pow(static_cast<double>(n), 1.0 - 1.0 / (100.0 * d))));
  for (int k = 0; k + 2 <= d; ++k) {
    b.i_after.push_back(static_cast<std::int64_t>(
        std::floor(half - std::pow(ln_n, d - 1.01 - k))));
    b.i_before.push_back(static_cast<std::int64_t>(
        std::floor(half - std::pow(ln_n, d - 0.8 - k))));
  }
  return b;
}

std::optional<int> PhaseBounds::phase_of(std::int64_t i) const {
  std::int64_t lower = i_trans + 1;
  for (std::size_t k = 0; k < i_after.size(); ++k) {
    if (i >= lower && i <= i_after[k]) return static_cast<int>(k);
    lower = i_after[k] + 1;
  }
  return std::nullopt;
}

bool PhaseBounds::ordered() const {
  std::int64_t previous = i_trans;
  for (std::int64_t boundary : i_after) {
    if (boundary <= previous) return false;
    previous = boundary;
  }
  return previous <= max_edges;
}

double envelope_first(std::uint64_t n, int d, std::int64_t i) {
  const PhaseBounds b = phase_bounds(n, d);
  if (i < 0 || i > b.i_trans) {
    throw DomainError("envelope_first: step " + std::to_string(i) +
                      " outside [0, i_trans=" + std::to_string(b.i_trans) + "]");
  }
  const double dn = static_cast<double>(d) * static_cast<double>(n);
  return std::pow(static_cast<double>(n), 0.6) *
         std::pow(dn / (dn - 2.0 * static_cast<double>(i)), 4.0 * d);
}

double envelope_second_unchecked(std::uint64_t n, int d, int j, int k, double i) {
  check_instance(n, d);
  if (k < 0 || k > d - 2 || j < k || j > d - 1) {
    throw ParameterError("envelope_second: need 0 <= k <= j <= d-1, k <= d-2");
  }
  const StepTheory th = eval_theory_at_step(n, d, i);
  return std::ldexp(1.0, k) * std::pow(std::log(static_cast<double>(n)), 0.05) *
         std::pow(th.ns[j], 0.7);
}

double envelope_second(std::uint64_t n, int d, int j, int k, std::int64_t i) {
  const PhaseBounds b = phase_bounds(n, d);
  const auto phase = b.phase_of(i);
  if (!phase || *phase != k) {
    throw DomainError("envelope_second: step " + std::to_string(i) +
                      " is not in phase I_" + std::to_string(k));
  }
  return envelope_second_unchecked(n, d, j, k, static_cast<double>(i));
}

double envelope_second_order(std::uint64_t n, int d, int j, double i) {
  check_instance(n, d);
  const double ln_n = std::log(static_cast<double>(n));
  return std::pow(ln_n, -0.7 * d + 0.75 + 0.7 * j) *
         std::pow(half_dn(n, d) - i, 0.7);
}

double i_of_r(std::uint64_t n, int d, double r, int ell) {
  check_instance(n, d);
  if (ell < 0 || ell > d - 2) throw ParameterError("i_of_r: l must be in [0, d-2]");
  if (!(r >= 0.0)) throw ParameterError("i_of_r: r must be non-negative");
  const double ln_n = std::log(static_cast<double>(n));
  const double coefficient =
      std::exp(std::lgamma(ell + 1.0) - std::lgamma(static_cast<double>(d))) / 2.0;
  return half_dn(n, d) - coefficient * r * std::pow(ln_n, d - 1 - ell);
}

}  // namespace dprocess
