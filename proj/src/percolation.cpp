#include "prodperc/percolation.hpp"

#include <algorithm>
#include <unordered_set>

#include "prodperc/analysis.hpp"
#include "prodperc/errors.hpp"

namespace prodperc {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Visited set that is a flat bitmap over all codes, or a hash set when the
// exploration is capped well below the vertex count.
class VisitedSet {
 public:
  VisitedSet(std::uint64_t vertex_count, std::uint64_t cap) {
    if (cap < 4096 && cap < vertex_count / 64) {
      sparse_ = true;
    } else {
      bits_.assign((vertex_count + 63) / 64, 0);
    }
  }

  // True when v was newly inserted.
  bool insert(VertexId v) {
    if (sparse_) return hashed_.insert(v.code).second;
    std::uint64_t& word = bits_[v.code >> 6];
    const std::uint64_t mask = std::uint64_t{1} << (v.code & 63);
    if (word & mask) return false;
    word |= mask;
    return true;
  }

  bool contains(VertexId v) const {
    if (sparse_) return hashed_.count(v.code) != 0;
    return (bits_[v.code >> 6] >> (v.code & 63)) & 1;
  }

 private:
  bool sparse_ = false;
  std::vector<std::uint64_t> bits_;
  std::unordered_set<std::uint64_t> hashed_;
};

class Bitmap {
 public:
  explicit Bitmap(std::uint64_t n) : bits_((n + 63) / 64, 0) {}
  bool test(std::uint64_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1; }
  void set(std::uint64_t i) { bits_[i >> 6] |= std::uint64_t{1} << (i & 63); }

 private:
  std::vector<std::uint64_t> bits_;
};

template <class Sampler>
ExplorationResult explore(const ProductGraph& g, const Sampler& s, VertexId v, std::uint64_t cap, bool keep_members) {
  if (!g.valid(v)) throw InvalidArgument("start vertex out of range");
  if (cap == 0) throw InvalidArgument("exploration cap must be positive");
  ExplorationResult result;
  VisitedSet visited(g.vertex_count(), cap);
  std::vector<VertexId> queue{v};
  visited.insert(v);
  result.size = 1;
  if (cap <= 1) {
    result.truncated = true;
  }
  std::size_t head = 0;
  while (head < queue.size() && !result.truncated) {
    const VertexId u = queue[head++];
    g.for_each_neighbor(u, [&](VertexId w) {
      if (result.truncated || visited.contains(w)) return;
      ++result.queried_edges;
      if (!s.open(u, w)) return;
      visited.insert(w);
      queue.push_back(w);
      if (++result.size >= cap) result.truncated = true;
    });
  }
  if (keep_members) result.members = std::move(queue);
  return result;
}

template <class Sampler>
CensusResult sweep(const ProductGraph& g, const Sampler& s, const std::vector<VertexId>* order,
                   std::vector<std::uint32_t>* labels) {
  const std::uint64_t n = g.vertex_count();
  if (n > kMaxProductVertices) throw SizeLimitError("census exceeds vertex budget");
  CensusResult out;
  out.vertex_count = n;
  out.seed = s.seed();
  out.p = s.p();
  if (labels != nullptr) labels->assign(n, 0);

  Bitmap visited(n);
  std::vector<std::uint32_t> queue;
  queue.reserve(1024);
  std::uint32_t component = 0;
  auto start_at = [&](VertexId root) {
    if (visited.test(root.code)) return;
    visited.set(root.code);
    queue.clear();
    queue.push_back(static_cast<std::uint32_t>(root.code));
    std::size_t head = 0;
    while (head < queue.size()) {
      const VertexId u{queue[head++]};
      g.for_each_neighbor(u, [&](VertexId w) {
        // A visited neighbour is either in this component already or in a
        // finished one, in which case the edge is closed.
        if (visited.test(w.code)) return;
        ++out.queried_edges;
        if (!s.open(u, w)) return;
        visited.set(w.code);
        queue.push_back(static_cast<std::uint32_t>(w.code));
      });
    }
    if (labels != nullptr) {
      for (std::uint32_t c : queue) (*labels)[c] = component;
    }
    ++component;
    out.component_sizes.push_back(queue.size());
  };

  if (order == nullptr) {
    for (std::uint64_t c = 0; c < n; ++c) start_at(VertexId{c});
  } else {
    if (order->size() != n) throw InvalidArgument("census order must list every vertex");
    for (VertexId v : *order) {
      if (!g.valid(v)) throw InvalidArgument("census order contains an invalid vertex");
      start_at(v);
    }
  }

  std::sort(out.component_sizes.begin(), out.component_sizes.end(), std::greater<>());
  out.largest = out.component_sizes.empty() ? 0 : out.component_sizes[0];
  out.second_largest = out.component_sizes.size() < 2 ? 0 : out.component_sizes[1];
  out.isolated = static_cast<std::uint64_t>(
      std::count(out.component_sizes.begin(), out.component_sizes.end(), std::uint64_t{1}));
  return out;
}

}  // namespace

EdgeKey canonical_edge_key(VertexId u, VertexId v) {
  if (u == v) throw InvalidArgument("edge key needs two distinct vertices");
  return u < v ? EdgeKey{u.code, v.code} : EdgeKey{v.code, u.code};
}

std::uint64_t edge_uniform64(std::uint64_t seed, std::uint32_t round_tag, EdgeKey key) noexcept {
  std::uint64_t h = mix64(seed ^ (kGolden * (std::uint64_t{round_tag} + 1)));
  h = mix64(h ^ (key.lo + kGolden));
  h = mix64(h ^ (key.hi + 2 * kGolden));
  return mix64(h);
}

EdgeSampler::EdgeSampler(std::uint64_t seed, double p, std::uint32_t round_tag)
    : seed_(seed), p_(p), round_tag_(round_tag) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("retention probability must lie in [0,1]");
}

UnionSampler::UnionSampler(EdgeSampler first, EdgeSampler second) : first_(first), second_(second) {
  if (first_.round_tag() == second_.round_tag()) {
    throw InvalidArgument("union of two rounds needs distinct round tags");
  }
}

UnionSampler union_sampler(const EdgeSampler& s1, const EdgeSampler& s2) { return UnionSampler(s1, s2); }

bool sample_edge(const EdgeSampler& s, VertexId u, VertexId v) { return s.open(u, v); }

ExplorationResult bfs_component(const ProductGraph& g, const EdgeSampler& s, VertexId v, std::uint64_t cap,
                                bool keep_members) {
  return explore(g, s, v, cap, keep_members);
}

ExplorationResult bfs_component(const ProductGraph& g, const UnionSampler& s, VertexId v, std::uint64_t cap,
                                bool keep_members) {
  return explore(g, s, v, cap, keep_members);
}

CensusResult census(const ProductGraph& g, const EdgeSampler& s, std::vector<std::uint32_t>* labels) {
  return sweep(g, s, nullptr, labels);
}

CensusResult census(const ProductGraph& g, const UnionSampler& s, std::vector<std::uint32_t>* labels) {
  return sweep(g, s, nullptr, labels);
}

CensusResult census_in_order(const ProductGraph& g, const EdgeSampler& s, const std::vector<VertexId>& order,
                             std::vector<std::uint32_t>* labels) {
  return sweep(g, s, &order, labels);
}

TwoRoundSchedule two_round_split(double p, double p2) {
  if (!(p >= 0.0 && p < 1.0)) throw InvalidArgument("two-round split needs 0 <= p < 1");
  if (!(p2 >= 0.0)) throw InvalidArgument("two-round split needs p2 >= 0");
  if (p2 > p) throw InvalidArgument("two-round split needs p2 <= p");
  return TwoRoundSchedule{p, (p - p2) / (1.0 - p2), p2};
}

LayerExploration layer_bfs(const ProductGraph& g, const EdgeSampler& s, VertexId v, int z, std::uint64_t cap) {
  star_power_leaves(g);
  if (z < 1 || z > static_cast<int>(g.factor_count())) throw InvalidArgument("layer index out of range for Γ_z");
  if (layer_of(g, v) != z) throw InvalidArgument("start vertex is not in layer " + std::to_string(z));
  if (cap == 0) throw InvalidArgument("exploration cap must be positive");

  // With centre = 0 in every star, an edge leaving M_z downwards turns a
  // centre coordinate into a leaf and so raises the code; an edge from
  // M_{z-1} up into M_z lowers it.
  LayerExploration out;
  auto& res = out.result;
  VisitedSet visited(g.vertex_count(), cap);
  std::vector<VertexId> upper{v};
  std::vector<VertexId> lower;
  visited.insert(v);
  res.size = 1;
  out.in_upper = 1;
  res.truncated = cap <= 1;
  std::size_t head = 0;
  while (head < upper.size() && !res.truncated) {
    const VertexId u = upper[head++];
    g.for_each_neighbor(u, [&](VertexId x) {
      if (res.truncated || x.code < u.code || visited.contains(x)) return;
      ++res.queried_edges;
      if (!s.open(u, x)) return;
      visited.insert(x);
      lower.push_back(x);
      ++out.in_lower;
      if (++res.size >= cap) {
        res.truncated = true;
        return;
      }
      g.for_each_neighbor(x, [&](VertexId y) {
        if (res.truncated || y.code > x.code || visited.contains(y)) return;
        ++res.queried_edges;
        if (!s.open(x, y)) return;
        visited.insert(y);
        upper.push_back(y);
        ++out.in_upper;
        if (++res.size >= cap) res.truncated = true;
      });
    });
  }
  std::vector<VertexId> members = upper;
  members.insert(members.end(), lower.begin(), lower.end());
  res.members = std::move(members);
  return out;
}

}  // namespace prodperc
