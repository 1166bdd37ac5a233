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

#ifndef DPROCESS_ENUMERATION_HPP_
#define DPROCESS_ENUMERATION_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

namespace dprocess {

using Rational = boost::multiprecision::cpp_rational;

/// Sentinel hitting time for "never reached" (the run got stuck first).
inline constexpr std::int64_t kNever = -1;

/// Exact laws of a tiny d-process instance.
struct ExactDistribution {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  /// hitting[l][T] = P[T_l = T], with T = kNever for stuck-before-hit.
  std::vector<std::map<std::int64_t, Rational>> hitting;
  std::map<std::uint64_t, Rational> final_edges;
  Rational stuck_probability = 0;
  /// Distinct (graph, hitting-times) states visited, summed over steps.
  std::uint64_t states_visited = 0;
};

/// Largest instance exact_enumeration accepts.
inline constexpr std::uint32_t kMaxEnumerationVertices = 8;
inline constexpr std::uint64_t kMaxEnumerationEdges = 8;

/// Propagates exact probabilities through every reachable state, step by
/// step, with branch probability 1/#valid pairs. States are merged by edge
/// set and hitting-time history, so the cost is the number of distinct
/// labelled graphs rather than the number of trajectories.
///
/// Throws ParameterError for invalid (n, d) and DomainError unless
/// n <= 8 and floor(dn/2) <= 8.
ExactDistribution exact_enumeration(std::uint32_t n, std::uint32_t d);

double to_double(const Rational& q);
nlohmann::json to_json(const ExactDistribution& dist);

}  // namespace dprocess

#endif  // DPROCESS_ENUMERATION_HPP_
