#include "prodperc/basegraphs.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "prodperc/errors.hpp"

namespace prodperc {

BaseGraph::BaseGraph(int n, const std::vector<Edge>& edges, std::string label) : label_(std::move(label)) {
  if (n < 1) throw InvalidArgument("graph needs at least one vertex, got n=" + std::to_string(n));
  adj_.resize(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n) {
      throw InvalidArgument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range for n=" +
                            std::to_string(n));
    }
    if (u == v) throw InvalidArgument("self-loop at vertex " + std::to_string(u));
    adj_[static_cast<std::size_t>(u)].push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
  }
  std::int64_t degree_sum = 0;
  for (auto& list : adj_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    degree_sum += static_cast<std::int64_t>(list.size());
  }
  edge_count_ = degree_sum / 2;
}

std::vector<BaseGraph::Edge> BaseGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int u = 0; u < n(); ++u) {
    for (int v : adj_[static_cast<std::size_t>(u)]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

BaseGraph complete(int r) {
  if (r < 1) throw InvalidArgument("complete graph needs r >= 1");
  std::vector<BaseGraph::Edge> edges;
  for (int u = 0; u < r; ++u) {
    for (int v = u + 1; v < r; ++v) edges.emplace_back(u, v);
  }
  return BaseGraph(r, edges, "K" + std::to_string(r));
}

BaseGraph star(int s) {
  if (s < 1) throw InvalidArgument("star needs at least one leaf");
  std::vector<BaseGraph::Edge> edges;
  for (int leaf = 1; leaf <= s; ++leaf) edges.emplace_back(0, leaf);
  return BaseGraph(s + 1, edges, "star(" + std::to_string(s) + ")");
}

BaseGraph star_clique(int r, int s) {
  if (r < 1) throw InvalidArgument("star_clique needs r >= 1");
  if (s < 0) throw InvalidArgument("star_clique needs s >= 0");
  std::vector<BaseGraph::Edge> edges;
  for (int u = 0; u < r; ++u) {
    for (int v = u + 1; v < r; ++v) edges.emplace_back(u, v);
  }
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < s; ++j) edges.emplace_back(i, r + i * s + j);
  }
  return BaseGraph(r * (s + 1), edges, "S(" + std::to_string(r) + "," + std::to_string(s) + ")");
}

BaseGraph cycle(int n) {
  if (n < 3) throw InvalidArgument("cycle needs n >= 3");
  std::vector<BaseGraph::Edge> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return BaseGraph(n, edges, "C" + std::to_string(n));
}

BaseGraph path(int n) {
  if (n < 1) throw InvalidArgument("path needs n >= 1");
  std::vector<BaseGraph::Edge> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return BaseGraph(n, edges, "P" + std::to_string(n));
}

BaseGraph from_edge_list(int n, const std::vector<BaseGraph::Edge>& edges, std::string label) {
  return BaseGraph(n, edges, std::move(label));
}

std::vector<int> bfs_distances(const BaseGraph& g, int source) {
  std::vector<int> dist(static_cast<std::size_t>(g.n()), -1);
  std::deque<int> queue{source};
  dist.at(static_cast<std::size_t>(source)) = 0;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int w : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

bool is_connected(const BaseGraph& g) {
  auto dist = bfs_distances(g, 0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

GraphStats stats(const BaseGraph& g) {
  GraphStats st;
  st.min_degree = g.degree(0);
  st.max_degree = g.degree(0);
  for (int v = 1; v < g.n(); ++v) {
    st.min_degree = std::min(st.min_degree, g.degree(v));
    st.max_degree = std::max(st.max_degree, g.degree(v));
  }
  st.avg_degree = Rational(2 * g.edge_count(), g.n());
  st.is_regular = st.min_degree == st.max_degree;
  st.is_connected = is_connected(g);
  return st;
}

Rational brute_force_isoperimetric(const BaseGraph& g) {
  const int n = g.n();
  if (n < 2) throw InvalidArgument("isoperimetric constant needs at least 2 vertices");
  if (n > kMaxIsoperimetricVertices) {
    throw SizeLimitError("exhaustive isoperimetric scan limited to " + std::to_string(kMaxIsoperimetricVertices) +
                         " vertices, got " + std::to_string(n));
  }
  std::vector<std::uint32_t> nbr_mask(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    for (int w : g.neighbors(v)) nbr_mask[static_cast<std::size_t>(v)] |= 1u << w;
  }

  // Gray-code walk: consecutive subsets differ in one vertex, so the boundary
  // edge count updates in O(1) per step.
  std::uint32_t set = 0;
  int size = 0;
  std::int64_t boundary = 0;
  std::int64_t best_num = -1;
  std::int64_t best_den = 1;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int v = std::countr_zero(i);
    const std::uint32_t bit = 1u << v;
    const std::uint32_t others = set & ~bit;
    const int inside = std::popcount(nbr_mask[static_cast<std::size_t>(v)] & others);
    const int delta = g.degree(v) - 2 * inside;
    if (set & bit) {
      set = others;
      --size;
      boundary -= delta;
    } else {
      set |= bit;
      ++size;
      boundary += delta;
    }
    if (2 * size <= n && (best_num < 0 || boundary * best_den < best_num * size)) {
      best_num = boundary;
      best_den = size;
    }
  }
  return Rational(best_num, best_den);
}

BaseGraph read_edge_list(std::istream& in, std::string label) {
  long long n = 0;
  long long m = 0;
  if (!(in >> n >> m)) throw InvalidArgument("edge list: missing \"n m\" header");
  if (n < 1 || m < 0) throw InvalidArgument("edge list: bad header");
  std::vector<BaseGraph::Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = 0;
    long long v = 0;
    if (!(in >> u >> v)) throw InvalidArgument("edge list: expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return BaseGraph(static_cast<int>(n), edges, std::move(label));
}

BaseGraph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open edge list");
  return read_edge_list(in, "file:" + path);
}

void write_edge_list(std::ostream& out, const BaseGraph& g) {
  auto edges = g.edges();
  out << g.n() << ' ' << edges.size() << '\n';
  for (auto [u, v] : edges) out << u << ' ' << v << '\n';
}

}  // namespace prodperc
