#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prodperc/basegraphs.hpp"
#include "prodperc/rational.hpp"

namespace prodperc {

// Mixed-radix code of a product vertex; coordinate i contributes coord_i * stride_i.
struct VertexId {
  std::uint64_t code = 0;

  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

// One visited bit per vertex must fit in 16 MiB.
inline constexpr std::uint64_t kMaxProductVertices = std::uint64_t{1} << 27;

// Per factor: nullopt keeps the factor in full, a value pins that coordinate.
struct Projection {
  std::vector<std::optional<int>> fixed;

  friend bool operator==(const Projection&, const Projection&) = default;
};

class ProductGraph;

// Forward range over the product neighbours of one vertex, factor-major and
// then in base adjacency order.
class NeighborRange {
 public:
  class iterator {
   public:
    using value_type = VertexId;
    using difference_type = std::ptrdiff_t;

    VertexId operator*() const;
    iterator& operator++();
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    bool operator==(std::default_sentinel_t) const noexcept { return factor_ >= range_->coords_.size(); }

   private:
    friend class NeighborRange;
    explicit iterator(const NeighborRange* range);
    void settle();

    const NeighborRange* range_ = nullptr;
    std::size_t factor_ = 0;
    std::size_t slot_ = 0;
  };

  iterator begin() const { return iterator(this); }
  std::default_sentinel_t end() const noexcept { return {}; }

 private:
  friend class ProductGraph;
  NeighborRange(const ProductGraph* graph, VertexId v, const Projection* proj);

  const ProductGraph* graph_;
  VertexId v_;
  std::vector<int> coords_;
  std::vector<bool> active_;
};

class ProductGraph {
 public:
  explicit ProductGraph(std::vector<BaseGraph> factors);

  std::size_t factor_count() const noexcept { return factors_.size(); }
  const std::vector<BaseGraph>& factors() const noexcept { return factors_; }
  const BaseGraph& factor(std::size_t i) const { return factors_.at(i); }
  const std::vector<std::uint64_t>& radices() const noexcept { return radices_; }
  const std::vector<std::uint64_t>& strides() const noexcept { return strides_; }
  std::uint64_t vertex_count() const noexcept { return vertex_count_; }
  // Number of non-trivial factors.
  int dimension() const noexcept { return dimension_; }
  // C in the degree-Lipschitz bound: the largest factor max-degree.
  int max_factor_degree() const noexcept { return max_factor_degree_; }
  bool factors_connected() const noexcept { return factors_connected_; }
  std::string label() const;

  VertexId encode(std::span<const int> coords) const;
  std::vector<int> decode(VertexId v) const;
  int coordinate(VertexId v, std::size_t factor) const {
    return static_cast<int>((v.code / strides_[factor]) % radices_[factor]);
  }
  bool valid(VertexId v) const noexcept { return v.code < vertex_count_; }

  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    std::uint64_t rest = v.code;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const auto coord = static_cast<int>(rest % radices_[i]);
      rest /= radices_[i];
      const auto base = static_cast<std::int64_t>(v.code) - static_cast<std::int64_t>(coord) * static_cast<std::int64_t>(strides_[i]);
      for (int w : factors_[i].neighbors(coord)) {
        f(VertexId{static_cast<std::uint64_t>(base + static_cast<std::int64_t>(w) * static_cast<std::int64_t>(strides_[i]))});
      }
    }
  }

  NeighborRange neighbors(VertexId v) const;
  int degree(VertexId v) const;
  Rational average_degree() const;
  std::int64_t edge_count() const;

  // Sum of coordinate distances. Requires every factor connected.
  int distance(VertexId u, VertexId v) const;

  bool contains(const Projection& proj, VertexId v) const;
  int projection_dimension(const Projection& proj) const;
  Projection full_projection() const;
  // Neighbours of v inside the projection subgraph.
  NeighborRange restrict_neighbors(const Projection& proj, VertexId v) const;

 private:
  friend class NeighborRange;
  int factor_distance(std::size_t factor, int a, int b) const;

  std::vector<BaseGraph> factors_;
  std::vector<std::uint64_t> radices_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t vertex_count_ = 1;
  int dimension_ = 0;
  int max_factor_degree_ = 0;
  bool factors_connected_ = true;
  // All-pairs tables for factors small enough to tabulate; empty otherwise.
  std::vector<std::vector<std::uint16_t>> distance_tables_;
};

// Factors above this size answer distance queries by a fresh BFS.
inline constexpr int kMaxTabulatedFactor = 2048;

ProductGraph build(std::vector<BaseGraph> factors);

// Two projections are vertex-disjoint iff some coordinate is pinned to
// different values in both.
bool projections_disjoint(const Projection& a, const Projection& b);

// Covers m <= dimension distinct vertices with pairwise disjoint projections of
// dimension >= dimension - m + 1, one vertex per projection. Output is in input order.
std::vector<std::pair<Projection, VertexId>> projection_cover(const ProductGraph& g, std::span<const VertexId> vertices);

// Explicit copy of a small product, vertex i = code i.
BaseGraph materialize(const ProductGraph& g, std::uint64_t max_vertices = std::uint64_t{1} << 20);

// Result of parsing a product specification such as "K2^5,S(4800,10)".
struct ProductSpec {
  std::vector<BaseGraph> factors;
  // Leaf count of the star or star-clique atoms, when any appear.
  std::optional<int> star_leaves;
};

ProductSpec parse_product_spec(std::string_view text);

}  // namespace prodperc
