#include "prodperc/product.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <map>

#include "prodperc/errors.hpp"

namespace prodperc {

// ---------------------------------------------------------------- NeighborRange

NeighborRange::NeighborRange(const ProductGraph* graph, VertexId v, const Projection* proj)
    : graph_(graph), v_(v), coords_(graph->decode(v)), active_(coords_.size(), true) {
  if (proj != nullptr) {
    for (std::size_t i = 0; i < coords_.size(); ++i) active_[i] = !proj->fixed[i].has_value();
  }
}

NeighborRange::iterator::iterator(const NeighborRange* range) : range_(range) { settle(); }

void NeighborRange::iterator::settle() {
  const auto& factors = range_->graph_->factors_;
  while (factor_ < range_->coords_.size() &&
         (!range_->active_[factor_] || slot_ >= factors[factor_].neighbors(range_->coords_[factor_]).size())) {
    ++factor_;
    slot_ = 0;
  }
}

VertexId NeighborRange::iterator::operator*() const {
  const auto& g = *range_->graph_;
  const int coord = range_->coords_[factor_];
  const int w = g.factors_[factor_].neighbors(coord)[slot_];
  const auto stride = static_cast<std::int64_t>(g.strides_[factor_]);
  return VertexId{static_cast<std::uint64_t>(static_cast<std::int64_t>(range_->v_.code) + (w - coord) * stride)};
}

NeighborRange::iterator& NeighborRange::iterator::operator++() {
  ++slot_;
  settle();
  return *this;
}

// ----------------------------------------------------------------- ProductGraph

ProductGraph::ProductGraph(std::vector<BaseGraph> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw InvalidArgument("product needs at least one factor");
  radices_.reserve(factors_.size());
  strides_.reserve(factors_.size());
  for (const auto& f : factors_) {
    const auto radix = static_cast<std::uint64_t>(f.n());
    strides_.push_back(vertex_count_);
    radices_.push_back(radix);
    if (vertex_count_ > kMaxProductVertices / radix) {
      throw SizeLimitError("product exceeds vertex budget of 2^27 vertices");
    }
    vertex_count_ *= radix;
    if (!f.trivial()) ++dimension_;
    const auto st = stats(f);
    max_factor_degree_ = std::max(max_factor_degree_, st.max_degree);
    factors_connected_ = factors_connected_ && st.is_connected;
  }
  if (vertex_count_ > kMaxProductVertices) throw SizeLimitError("product exceeds vertex budget of 2^27 vertices");

  distance_tables_.resize(factors_.size());
  if (factors_connected_) {
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      const int n = factors_[i].n();
      if (n > kMaxTabulatedFactor) continue;
      auto& table = distance_tables_[i];
      table.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a) {
        auto dist = bfs_distances(factors_[i], a);
        for (int b = 0; b < n; ++b) {
          table[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)] =
              static_cast<std::uint16_t>(dist[static_cast<std::size_t>(b)]);
        }
      }
    }
  }
}

ProductGraph build(std::vector<BaseGraph> factors) { return ProductGraph(std::move(factors)); }

std::string ProductGraph::label() const {
  std::string out;
  for (std::size_t i = 0; i < factors_.size();) {
    std::size_t j = i;
    while (j < factors_.size() && factors_[j].label() == factors_[i].label()) ++j;
    if (!out.empty()) out += ",";
    out += factors_[i].label().empty() ? "G" + std::to_string(i) : factors_[i].label();
    if (j - i > 1) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

VertexId ProductGraph::encode(std::span<const int> coords) const {
  if (coords.size() != factors_.size()) {
    throw InvalidArgument("expected " + std::to_string(factors_.size()) + " coordinates, got " +
                          std::to_string(coords.size()));
  }
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || static_cast<std::uint64_t>(coords[i]) >= radices_[i]) {
      throw InvalidArgument("coordinate " + std::to_string(i) + " out of range: " + std::to_string(coords[i]));
    }
    code += static_cast<std::uint64_t>(coords[i]) * strides_[i];
  }
  return VertexId{code};
}

std::vector<int> ProductGraph::decode(VertexId v) const {
  if (!valid(v)) throw InvalidArgument("vertex code " + std::to_string(v.code) + " out of range");
  std::vector<int> coords(factors_.size());
  std::uint64_t rest = v.code;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    coords[i] = static_cast<int>(rest % radices_[i]);
    rest /= radices_[i];
  }
  return coords;
}

NeighborRange ProductGraph::neighbors(VertexId v) const { return NeighborRange(this, v, nullptr); }

int ProductGraph::degree(VertexId v) const {
  int deg = 0;
  std::uint64_t rest = v.code;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    deg += factors_[i].degree(static_cast<int>(rest % radices_[i]));
    rest /= radices_[i];
  }
  return deg;
}

Rational ProductGraph::average_degree() const {
  Rational sum;
  for (const auto& f : factors_) sum += Rational(2 * f.edge_count(), f.n());
  return sum;
}

std::int64_t ProductGraph::edge_count() const {
  // Each factor edge appears once per choice of the other coordinates.
  std::int64_t total = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    total += factors_[i].edge_count() * static_cast<std::int64_t>(vertex_count_ / radices_[i]);
  }
  return total;
}

int ProductGraph::factor_distance(std::size_t factor, int a, int b) const {
  const auto& table = distance_tables_[factor];
  if (!table.empty()) {
    return table[static_cast<std::size_t>(a) * radices_[factor] + static_cast<std::size_t>(b)];
  }
  return bfs_distances(factors_[factor], a)[static_cast<std::size_t>(b)];
}

int ProductGraph::distance(VertexId u, VertexId v) const {
  if (!factors_connected_) throw UnsupportedOperation("distance needs every factor connected");
  auto cu = decode(u);
  auto cv = decode(v);
  int total = 0;
  for (std::size_t i = 0; i < cu.size(); ++i) {
    if (cu[i] != cv[i]) total += factor_distance(i, cu[i], cv[i]);
  }
  return total;
}

bool ProductGraph::contains(const Projection& proj, VertexId v) const {
  if (proj.fixed.size() != factors_.size()) throw InvalidArgument("projection arity does not match product");
  std::uint64_t rest = v.code;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto coord = static_cast<int>(rest % radices_[i]);
    rest /= radices_[i];
    if (proj.fixed[i] && *proj.fixed[i] != coord) return false;
  }
  return true;
}

int ProductGraph::projection_dimension(const Projection& proj) const {
  int dim = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (!proj.fixed.at(i) && !factors_[i].trivial()) ++dim;
  }
  return dim;
}

Projection ProductGraph::full_projection() const { return Projection{std::vector<std::optional<int>>(factors_.size())}; }

NeighborRange ProductGraph::restrict_neighbors(const Projection& proj, VertexId v) const {
  if (!valid(v) || !contains(proj, v)) throw InvalidArgument("vertex does not lie in the projection");
  return NeighborRange(this, v, &proj);
}

// ------------------------------------------------------------------ projections

bool projections_disjoint(const Projection& a, const Projection& b) {
  const std::size_t n = std::min(a.fixed.size(), b.fixed.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.fixed[i] && b.fixed[i] && *a.fixed[i] != *b.fixed[i]) return true;
  }
  return false;
}

namespace {

void split_cover(const std::vector<std::vector<int>>& coords, std::vector<std::size_t> group, Projection proj,
                 std::vector<std::pair<Projection, VertexId>>& out, std::span<const VertexId> vertices) {
  if (group.size() == 1) {
    out[group.front()] = {std::move(proj), vertices[group.front()]};
    return;
  }
  const std::size_t arity = proj.fixed.size();
  std::size_t split = arity;
  for (std::size_t i = 0; i < arity && split == arity; ++i) {
    if (proj.fixed[i]) continue;
    for (std::size_t k = 1; k < group.size(); ++k) {
      if (coords[group[k]][i] != coords[group[0]][i]) {
        split = i;
        break;
      }
    }
  }
  // Distinct vertices inside one projection always disagree on a free coordinate.
  std::map<int, std::vector<std::size_t>> parts;
  for (std::size_t idx : group) parts[coords[idx][split]].push_back(idx);
  for (auto& [value, part] : parts) {
    Projection child = proj;
    child.fixed[split] = value;
    split_cover(coords, std::move(part), std::move(child), out, vertices);
  }
}

}  // namespace

std::vector<std::pair<Projection, VertexId>> projection_cover(const ProductGraph& g, std::span<const VertexId> vertices) {
  const std::size_t m = vertices.size();
  if (m > static_cast<std::size_t>(g.dimension())) {
    throw InvalidArgument("projection cover needs |M| <= dimension (" + std::to_string(g.dimension()) + "), got " +
                          std::to_string(m));
  }
  std::vector<std::pair<Projection, VertexId>> out(m);
  if (m == 0) return out;
  std::vector<VertexId> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("projection cover needs distinct vertices");
  }
  std::vector<std::vector<int>> coords;
  coords.reserve(m);
  for (VertexId v : vertices) coords.push_back(g.decode(v));
  std::vector<std::size_t> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = i;
  split_cover(coords, std::move(all), g.full_projection(), out, vertices);
  return out;
}

BaseGraph materialize(const ProductGraph& g, std::uint64_t max_vertices) {
  if (g.vertex_count() > max_vertices) {
    throw SizeLimitError("materialize limited to " + std::to_string(max_vertices) + " vertices");
  }
  std::vector<BaseGraph::Edge> edges;
  for (std::uint64_t c = 0; c < g.vertex_count(); ++c) {
    g.for_each_neighbor(VertexId{c}, [&](VertexId w) {
      if (c < w.code) edges.emplace_back(static_cast<int>(c), static_cast<int>(w.code));
    });
  }
  return BaseGraph(static_cast<int>(g.vertex_count()), edges, g.label());
}

// ------------------------------------------------------------------------ parse

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

int parse_int(std::string_view s, std::string_view context) {
  s = trim(s);
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("bad integer '" + std::string(s) + "' in product atom '" + std::string(context) + "'");
  }
  return value;
}

std::vector<int> parse_args(std::string_view body, std::string_view atom) {
  // body is "(a,b,...)"
  if (body.size() < 2 || body.front() != '(' || body.back() != ')') {
    throw InvalidArgument("malformed arguments in product atom '" + std::string(atom) + "'");
  }
  body = body.substr(1, body.size() - 2);
  std::vector<int> args;
  while (true) {
    auto comma = body.find(',');
    args.push_back(parse_int(body.substr(0, comma), atom));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return args;
}

}  // namespace

ProductSpec parse_product_spec(std::string_view text) {
  ProductSpec spec;
  std::vector<std::string_view> atoms;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      atoms.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    } else if (text[i] == '(') {
      ++depth;
    } else if (text[i] == ')') {
      --depth;
    }
  }
  for (std::string_view atom : atoms) {
    if (atom.empty()) throw InvalidArgument("empty atom in product spec '" + std::string(text) + "'");
    std::string_view body = atom;
    int power = 1;
    if (auto caret = atom.rfind('^'); caret != std::string_view::npos && atom.find(')', caret) == std::string_view::npos) {
      power = parse_int(atom.substr(caret + 1), atom);
      body = trim(atom.substr(0, caret));
      if (power < 1) throw InvalidArgument("power must be positive in '" + std::string(atom) + "'");
    }
    std::optional<BaseGraph> factor;
    if (body.starts_with("file:")) {
      factor = read_edge_list_file(std::string(body.substr(5)));
    } else if (body.starts_with("star")) {
      auto args = parse_args(body.substr(4), atom);
      if (args.size() != 1) throw InvalidArgument("star takes one argument");
      factor = star(args[0]);
      spec.star_leaves = args[0];
    } else if (body.starts_with("S(")) {
      auto args = parse_args(body.substr(1), atom);
      if (args.size() != 2) throw InvalidArgument("S(r,s) takes two arguments");
      factor = star_clique(args[0], args[1]);
      spec.star_leaves = args[1];
    } else if (body.starts_with("K")) {
      factor = complete(parse_int(body.substr(1), atom));
    } else if (body.starts_with("C")) {
      factor = cycle(parse_int(body.substr(1), atom));
    } else if (body.starts_with("P")) {
      factor = path(parse_int(body.substr(1), atom));
    } else {
      throw InvalidArgument("unknown product atom '" + std::string(atom) + "'");
    }
    for (int k = 0; k < power; ++k) spec.factors.push_back(*factor);
  }
  return spec;
}

}  // namespace prodperc
