#pragma once

#include <cstdint>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "prodperc/product.hpp"

namespace prodperc {

// Unordered vertex pair as (min code, max code).
struct EdgeKey {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend constexpr bool operator==(EdgeKey, EdgeKey) = default;
};

EdgeKey canonical_edge_key(VertexId u, VertexId v);

// The edge PRF: (seed, round_tag, key) -> 64 uniform bits. A SplitMix64
// finalizer chain; the constants and the order of absorption are frozen
// because recorded test vectors depend on them.
std::uint64_t edge_uniform64(std::uint64_t seed, std::uint32_t round_tag, EdgeKey key) noexcept;

// Top 53 bits of edge_uniform64 as a double in [0, 1).
inline double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Stateless Bernoulli oracle: an edge is open iff its uniform value is < p,
// which couples all p monotonically for a fixed seed.
class EdgeSampler {
 public:
  EdgeSampler(std::uint64_t seed, double p, std::uint32_t round_tag = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  double p() const noexcept { return p_; }
  std::uint32_t round_tag() const noexcept { return round_tag_; }

  double uniform(VertexId u, VertexId v) const noexcept {
    return to_unit_interval(edge_uniform64(seed_, round_tag_, canonical_edge_key(u, v)));
  }
  bool open(VertexId u, VertexId v) const noexcept { return uniform(u, v) < p_; }

 private:
  std::uint64_t seed_;
  double p_;
  std::uint32_t round_tag_;
};

// Union of two independent exposure rounds over the same host graph.
class UnionSampler {
 public:
  UnionSampler(EdgeSampler first, EdgeSampler second);

  const EdgeSampler& first() const noexcept { return first_; }
  const EdgeSampler& second() const noexcept { return second_; }
  std::uint64_t seed() const noexcept { return first_.seed(); }
  // Retention probability of the union, 1 - (1-p1)(1-p2).
  double p() const noexcept { return 1.0 - (1.0 - first_.p()) * (1.0 - second_.p()); }
  bool open(VertexId u, VertexId v) const noexcept { return first_.open(u, v) || second_.open(u, v); }

 private:
  EdgeSampler first_;
  EdgeSampler second_;
};

UnionSampler union_sampler(const EdgeSampler& s1, const EdgeSampler& s2);

bool sample_edge(const EdgeSampler& s, VertexId u, VertexId v);

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

struct ExplorationResult {
  std::uint64_t size = 0;
  bool truncated = false;
  std::optional<std::vector<VertexId>> members;
  std::uint64_t queried_edges = 0;
};

// FIFO exploration of the open cluster of v, stopping once `cap` vertices have
// been discovered. Members are recorded when `keep_members` is set.
ExplorationResult bfs_component(const ProductGraph& g, const EdgeSampler& s, VertexId v,
                                std::uint64_t cap = kUnbounded, bool keep_members = true);
ExplorationResult bfs_component(const ProductGraph& g, const UnionSampler& s, VertexId v,
                                std::uint64_t cap = kUnbounded, bool keep_members = true);

struct CensusResult {
  std::vector<std::uint64_t> component_sizes;  // descending
  std::uint64_t largest = 0;
  std::uint64_t second_largest = 0;
  std::uint64_t isolated = 0;
  std::uint64_t vertex_count = 0;
  std::uint64_t queried_edges = 0;
  std::uint64_t seed = 0;
  double p = 0.0;

  std::uint64_t component_count() const noexcept { return component_sizes.size(); }
};

// Exact component structure of G_p. The sweep visits start vertices in code
// order; `labels`, when non-null, receives for each vertex the index of its
// component in discovery order.
CensusResult census(const ProductGraph& g, const EdgeSampler& s, std::vector<std::uint32_t>* labels = nullptr);
CensusResult census(const ProductGraph& g, const UnionSampler& s, std::vector<std::uint32_t>* labels = nullptr);

// Census with an explicit start order; must give the same partition as census().
CensusResult census_in_order(const ProductGraph& g, const EdgeSampler& s, const std::vector<VertexId>& order,
                             std::vector<std::uint32_t>* labels = nullptr);

struct TwoRoundSchedule {
  double p = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  // |(1-p1)(1-p2) - (1-p)|
  double identity_error() const noexcept { return std::abs((1.0 - p1) * (1.0 - p2) - (1.0 - p)); }
};

TwoRoundSchedule two_round_split(double p, double p2);

// Two-step exploration of the layer graph between M_z and M_{z-1} of a star
// power, following FIFO on the M_z side.
struct LayerExploration {
  ExplorationResult result;
  std::uint64_t in_upper = 0;  // |W ∩ M_z|
  std::uint64_t in_lower = 0;  // |W ∩ M_{z-1}|
};

LayerExploration layer_bfs(const ProductGraph& g, const EdgeSampler& s, VertexId v, int z,
                           std::uint64_t cap = kUnbounded);

}  // namespace prodperc
