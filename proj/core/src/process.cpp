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

#include "dprocess/process.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <string>

#include "dprocess/error.hpp"

namespace dprocess {

void ProcessParams::validate() const {
  if (n < 2) {
    throw ParameterError("n must be at least 2 (got " + std::to_string(n) + ")");
  }
  if (d < 1) {
    throw ParameterError("d must be at least 1");
  }
  if (d >= n) {
    throw ParameterError("d must be smaller than n (got d=" + std::to_string(d) +
                         ", n=" + std::to_string(n) + ")");
  }
}

Process::Process(const ProcessParams& params) : params_(params) {
  params_.validate();
  degree_.resize(params_.n);
  adjacency_.resize(static_cast<std::size_t>(params_.n) * params_.d);
  unsat_.resize(params_.n);
  unsat_pos_.resize(params_.n);
  s_.resize(params_.d);
  reset(params_.seed);
}

void Process::reset(std::uint64_t seed) {
  params_.seed = seed;
  rng_.reseed(seed);
  steps_ = 0;
  stuck_ = false;
  std::fill(degree_.begin(), degree_.end(), 0u);
  unsat_.resize(params_.n);
  std::iota(unsat_.begin(), unsat_.end(), Vertex{0});
  std::iota(unsat_pos_.begin(), unsat_pos_.end(), std::uint32_t{0});
  std::fill(s_.begin(), s_.end(), static_cast<std::uint64_t>(params_.n));
}

bool Process::adjacent(Vertex u, Vertex v) const {
  if (degree_[u] > degree_[v]) std::swap(u, v);
  const Vertex* row = adjacency_.data() + static_cast<std::size_t>(u) * params_.d;
  const Vertex* end = row + degree_[u];
  return std::find(row, end, v) != end;
}

void Process::apply(Vertex u, Vertex v) {
  const std::uint32_t d = params_.d;
  for (Vertex w : {u, v}) {
    const Vertex other = (w == u) ? v : u;
    const std::uint32_t c = degree_[w];
    adjacency_[static_cast<std::size_t>(w) * d + c] = other;
    degree_[w] = c + 1;
    // w leaves "degree <= c" and stays in "degree <= j" for every j > c.
    --s_[c];
    if (c + 1 == d) {
      const std::uint32_t pos = unsat_pos_[w];
      const Vertex last = unsat_.back();
      unsat_[pos] = last;
      unsat_pos_[last] = pos;
      unsat_.pop_back();
    }
  }
  ++steps_;
#ifndef NDEBUG
  const std::uint64_t sum = std::accumulate(s_.begin(), s_.end(), std::uint64_t{0});
  assert(sum == static_cast<std::uint64_t>(d) * params_.n - 2 * steps_);
#endif
}

bool Process::sample_by_rejection(Vertex& u, Vertex& v) {
  const std::uint64_t m = unsat_.size();
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    const std::uint64_t a = rng_.uniform(m);
    std::uint64_t b = rng_.uniform(m - 1);
    if (b >= a) ++b;
    u = unsat_[a];
    v = unsat_[b];
    if (!adjacent(u, v)) return true;
  }
  return false;
}

bool Process::sample_by_enumeration(Vertex& u, Vertex& v) {
  scratch_pairs_.clear();
  const std::size_t m = unsat_.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (!adjacent(unsat_[a], unsat_[b])) {
        scratch_pairs_.emplace_back(unsat_[a], unsat_[b]);
      }
    }
  }
  if (scratch_pairs_.empty()) return false;
  const auto& pick = scratch_pairs_[rng_.uniform(scratch_pairs_.size())];
  u = pick.first;
  v = pick.second;
  return true;
}

StepEvent Process::step() {
  StepEvent event;
  if (finished()) return event;

  Vertex u = 0;
  Vertex v = 0;
  bool found = false;
  if (unsat_.size() >= 2) {
    if (unsat_.size() > kEnumerationThreshold) {
      found = sample_by_rejection(u, v);
    }
    if (!found) found = sample_by_enumeration(u, v);
  }
  if (!found) {
    stuck_ = true;
    return event;
  }
  // One draw orders the pair, independently of how it was sampled.
  if (rng_.next() >> 63) std::swap(u, v);

  event.kind = StepEvent::Kind::kEdgeAdded;
  event.u = u;
  event.v = v;
  event.deg_u_before = degree_[u];
  event.deg_v_before = degree_[v];
  apply(u, v);
  return event;
}

void Process::add_edge(Vertex u, Vertex v) {
  const std::uint32_t n = params_.n;
  if (u >= n || v >= n || u == v) {
    throw ParameterError("add_edge: invalid vertex pair");
  }
  if (degree_[u] >= params_.d || degree_[v] >= params_.d) {
    throw ParameterError("add_edge: endpoint already has degree d");
  }
  if (adjacent(u, v)) {
    throw ParameterError("add_edge: vertices already adjacent");
  }
  apply(u, v);
}

std::vector<std::pair<Vertex, Vertex>> Process::valid_pairs() const {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  const std::size_t m = unsat_.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (!adjacent(unsat_[a], unsat_[b])) pairs.emplace_back(unsat_[a], unsat_[b]);
    }
  }
  return pairs;
}

EdgeClassCounts Process::edge_class_counts() const {
  const std::uint32_t d = params_.d;
  EdgeClassCounts counts;
  counts.z.assign(d, std::vector<std::uint64_t>(d, 0));
  for (Vertex u = 0; u < params_.n; ++u) {
    for (Vertex v : neighbors(u)) {
      if (v <= u) continue;
      const std::uint32_t lo = std::min(degree_[u], degree_[v]);
      const std::uint32_t hi = std::max(degree_[u], degree_[v]);
      if (hi >= d) continue;
      ++counts.z[lo][hi];
      ++counts.total;
    }
  }
  return counts;
}

}  // namespace dprocess
