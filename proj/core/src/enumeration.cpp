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

#include "dprocess/enumeration.hpp"

#include <array>
#include <string>
#include <utility>

#include "dprocess/error.hpp"
#include "dprocess/process.hpp"

namespace dprocess {
namespace {

// Hitting times packed 4 bits each; 0xF means not yet hit.
constexpr std::uint64_t kUnset = 0xF;

struct Instance {
  std::uint32_t n;
  std::uint32_t d;
  std::vector<std::pair<int, int>> pairs;  // bit index -> vertex pair
};

std::uint32_t degree(const Instance& inst, std::uint32_t mask, int v) {
  std::uint32_t deg = 0;
  for (std::size_t b = 0; b < inst.pairs.size(); ++b) {
    if ((mask >> b) & 1u) {
      deg += (inst.pairs[b].first == v) + (inst.pairs[b].second == v);
    }
  }
  return deg;
}

}  // namespace

double to_double(const Rational& q) { return q.convert_to<double>(); }

ExactDistribution exact_enumeration(std::uint32_t n, std::uint32_t d) {
  ProcessParams{n, d, 0}.validate();
  const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * d / 2;
  if (n > kMaxEnumerationVertices || max_edges > kMaxEnumerationEdges) {
    throw DomainError("exact_enumeration: instance too large (need n <= 8 and "
                      "floor(dn/2) <= 8, got n=" + std::to_string(n) +
                      ", d=" + std::to_string(d) + ")");
  }

  Instance inst{n, d, {}};
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = a + 1; b < n; ++b) inst.pairs.emplace_back(a, b);
  }
  const std::size_t tracked = d >= 2 ? d - 1 : 0;

  ExactDistribution out;
  out.n = n;
  out.d = d;
  out.hitting.resize(tracked);

  auto record_terminal = [&](std::uint64_t packed, std::uint64_t edges,
                             const Rational& p, bool stuck) {
    for (std::size_t l = 0; l < tracked; ++l) {
      const std::uint64_t t = (packed >> (4 * l)) & kUnset;
      out.hitting[l][t == kUnset ? kNever : static_cast<std::int64_t>(t)] += p;
    }
    out.final_edges[edges] += p;
    if (stuck) out.stuck_probability += p;
  };

  std::uint64_t all_unset = 0;
  for (std::size_t l = 0; l < tracked; ++l) all_unset |= kUnset << (4 * l);

  using Key = std::pair<std::uint32_t, std::uint64_t>;
  std::map<Key, Rational> layer{{{0u, all_unset}, Rational(1)}};
  for (std::uint64_t step = 0; step < max_edges; ++step) {
    std::map<Key, Rational> next;
    out.states_visited += layer.size();
    for (const auto& [key, p] : layer) {
      const auto [mask, packed] = key;
      std::array<std::uint32_t, kMaxEnumerationVertices> deg{};
      for (std::uint32_t v = 0; v < n; ++v) deg[v] = degree(inst, mask, static_cast<int>(v));

      std::vector<std::size_t> valid;
      for (std::size_t b = 0; b < inst.pairs.size(); ++b) {
        const auto [u, v] = inst.pairs[b];
        if (!((mask >> b) & 1u) && deg[u] < d && deg[v] < d) valid.push_back(b);
      }
      if (valid.empty()) {
        record_terminal(packed, step, p, /*stuck=*/true);
        continue;
      }
      const Rational branch = p / static_cast<long long>(valid.size());
      for (std::size_t b : valid) {
        const auto [u, v] = inst.pairs[b];
        auto child_deg = deg;
        ++child_deg[u];
        ++child_deg[v];
        std::uint64_t child_packed = packed;
        for (std::size_t l = 0; l < tracked; ++l) {
          if (((child_packed >> (4 * l)) & kUnset) != kUnset) continue;
          bool any_low = false;
          for (std::uint32_t w = 0; w < n; ++w) any_low |= child_deg[w] <= l;
          if (!any_low) {
            child_packed &= ~(kUnset << (4 * l));
            child_packed |= (step + 1) << (4 * l);
          }
        }
        next[{mask | (1u << b), child_packed}] += branch;
      }
    }
    layer = std::move(next);
  }
  out.states_visited += layer.size();
  for (const auto& [key, p] : layer) record_terminal(key.second, max_edges, p, false);
  return out;
}

nlohmann::json to_json(const ExactDistribution& dist) {
  auto q = [](const Rational& r) {
    return nlohmann::json{{"exact", r.str()}, {"value", to_double(r)}};
  };
  nlohmann::json hitting = nlohmann::json::array();
  for (std::size_t l = 0; l < dist.hitting.size(); ++l) {
    nlohmann::json law = nlohmann::json::array();
    for (const auto& [t, p] : dist.hitting[l]) {
      law.push_back({{"T", t == kNever ? nlohmann::json(nullptr) : nlohmann::json(t)},
                     {"probability", q(p)}});
    }
    hitting.push_back({{"level", l}, {"law", law}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [e, p] : dist.final_edges) {
    edges.push_back({{"final_edges", e}, {"probability", q(p)}});
  }
  return {{"n", dist.n},
          {"d", dist.d},
          {"hitting_times", hitting},
          {"final_edges", edges},
          {"stuck_probability", q(dist.stuck_probability)},
          {"saturation_probability", q(1 - dist.stuck_probability)}};
}

}  // namespace dprocess
