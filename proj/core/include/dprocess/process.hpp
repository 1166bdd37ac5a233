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

#ifndef DPROCESS_PROCESS_HPP_
#define DPROCESS_PROCESS_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dprocess/rng.hpp"

namespace dprocess {

using Vertex = std::uint32_t;

struct ProcessParams {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint64_t seed = 0;

  /// Throws ParameterError unless n >= 2, d >= 1 and d < n.
  void validate() const;

  /// floor(dn/2), the edge count of a saturated run.
  std::uint64_t max_edges() const {
    return static_cast<std::uint64_t>(n) * d / 2;
  }
};

/// One transition of the process. On `kEdgeAdded` the pair (u, v) is in
/// uniformly random order and the degrees are those just before the step.
struct StepEvent {
  enum class Kind { kEdgeAdded, kStuck };

  Kind kind = Kind::kStuck;
  Vertex u = 0;
  Vertex v = 0;
  std::uint32_t deg_u_before = 0;
  std::uint32_t deg_v_before = 0;

  bool added() const { return kind == Kind::kEdgeAdded; }
};

/// Edge counts by endpoint-degree class. Only edges whose endpoints both have
/// degree <= d-1 are counted; z[j1][j2] is used for j1 <= j2.
struct EdgeClassCounts {
  std::vector<std::vector<std::uint64_t>> z;
  std::uint64_t total = 0;
};

/// Live state of one d-process run.
///
/// Vertices with degree <= d-1 are kept in a dense index (`unsat`) with a
/// position table, so picking a uniform unsaturated vertex and retiring a
/// saturated one are both O(1). Adjacency is a flat n*d array of neighbor ids;
/// the degree cap makes membership tests O(d).
///
/// S[j] is the number of vertices of degree at most j, for j in 0..d-1, and
/// is maintained incrementally. After every step
///   S[0] + ... + S[d-1] == d*n - 2*i.
///
/// The type is copyable: a copy is an independent snapshot that can be
/// reseeded and stepped on its own.
class Process {
 public:
  explicit Process(const ProcessParams& params);

  /// Back to the empty graph with a new seed. Reuses all buffers.
  void reset(std::uint64_t seed);

  /// Adds one uniformly random valid edge. If no valid pair exists the
  /// process is marked stuck and a kStuck event is returned; stepping a stuck
  /// or saturated process also returns kStuck without changing anything.
  StepEvent step();

  /// Inserts a specific edge, bypassing the sampler. Used to build fixed
  /// states for tests and replay experiments. Throws ParameterError when
  /// {u, v} is not a valid pair.
  void add_edge(Vertex u, Vertex v);

  void reseed(std::uint64_t seed) { rng_.reseed(seed); }

  const ProcessParams& params() const { return params_; }
  std::uint64_t steps() const { return steps_; }
  bool stuck() const { return stuck_; }
  bool saturated() const { return steps_ == params_.max_edges(); }
  bool finished() const { return stuck_ || saturated(); }

  std::span<const std::uint64_t> s_counts() const { return s_; }
  std::uint32_t degree(Vertex v) const { return degree_[v]; }
  std::span<const Vertex> neighbors(Vertex v) const {
    return {adjacency_.data() + static_cast<std::size_t>(v) * params_.d,
            degree_[v]};
  }
  std::span<const Vertex> unsaturated() const { return unsat_; }

  bool adjacent(Vertex u, Vertex v) const;

  /// Every currently valid unordered pair, each listed once with the
  /// smaller unsat-index first. O(|unsat|^2 d).
  std::vector<std::pair<Vertex, Vertex>> valid_pairs() const;

  /// Recomputed by scanning every edge. O(n d).
  EdgeClassCounts edge_class_counts() const;

 private:
  /// Rejection attempts before switching to explicit enumeration.
  static constexpr int kMaxRejections = 256;
  /// At or below this many unsaturated vertices, always enumerate.
  static constexpr std::size_t kEnumerationThreshold = 64;

  void apply(Vertex u, Vertex v);
  bool sample_by_rejection(Vertex& u, Vertex& v);
  bool sample_by_enumeration(Vertex& u, Vertex& v);

  ProcessParams params_;
  Rng rng_;
  std::uint64_t steps_ = 0;
  bool stuck_ = false;
  std::vector<std::uint32_t> degree_;
  std::vector<Vertex> adjacency_;
  std::vector<Vertex> unsat_;
  std::vector<std::uint32_t> unsat_pos_;
  std::vector<std::uint64_t> s_;
  std::vector<std::pair<Vertex, Vertex>> scratch_pairs_;
};

}  // namespace dprocess

#endif  // DPROCESS_PROCESS_HPP_
