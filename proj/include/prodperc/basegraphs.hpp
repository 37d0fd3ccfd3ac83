#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "prodperc/rational.hpp"

namespace prodperc {

// A small explicit graph used as one factor of a product. Immutable once built;
// every constructor goes through from_edge_list-style normalization so
// adjacency lists are sorted, symmetric, loop-free and duplicate-free.
class BaseGraph {
 public:
  using Edge = std::pair<int, int>;

  BaseGraph(int n, const std::vector<Edge>& edges, std::string label = {});

  int n() const noexcept { return static_cast<int>(adj_.size()); }
  const std::vector<int>& neighbors(int v) const { return adj_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::vector<int>>& adjacency() const noexcept { return adj_; }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  std::int64_t edge_count() const noexcept { return edge_count_; }
  const std::string& label() const noexcept { return label_; }
  bool trivial() const noexcept { return adj_.size() == 1; }

  // Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;

 private:
  std::vector<std::vector<int>> adj_;
  std::int64_t edge_count_ = 0;
  std::string label_;
};

struct GraphStats {
  int min_degree = 0;
  int max_degree = 0;
  Rational avg_degree;
  bool is_regular = false;
  bool is_connected = false;
};

BaseGraph complete(int r);
// Centre is vertex 0, leaves are 1..s.
BaseGraph star(int s);
// K_r with s pendant leaves per clique vertex. Clique vertices 0..r-1, leaf j of
// clique vertex i is r + i*s + j.
BaseGraph star_clique(int r, int s);
BaseGraph cycle(int n);
BaseGraph path(int n);
BaseGraph from_edge_list(int n, const std::vector<BaseGraph::Edge>& edges, std::string label = {});

GraphStats stats(const BaseGraph& g);
bool is_connected(const BaseGraph& g);
// Hop distances from `source`; -1 for unreachable vertices.
std::vector<int> bfs_distances(const BaseGraph& g, int source);

inline constexpr int kMaxIsoperimetricVertices = 24;

// Exact edge-isoperimetric constant min e(S, S^c)/|S| over 0 < |S| <= n/2 by a
// Gray-code scan of all 2^n subsets.
Rational brute_force_isoperimetric(const BaseGraph& g);

// "n m" header followed by m lines "u v".
BaseGraph read_edge_list(std::istream& in, std::string label = {});
BaseGraph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const BaseGraph& g);

}  // namespace prodperc
