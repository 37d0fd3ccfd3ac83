#include "prodperc/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "prodperc/errors.hpp"

namespace prodperc {

// ------------------------------------------------------------ survival

namespace {

double survival_gap(double epsilon, double y) { return y - 1.0 + std::exp(-(1.0 + epsilon) * y); }

}  // namespace

SurvivalPoint solve_y(double epsilon, double tol) {
  if (!(epsilon > 0.0)) throw InvalidArgument("solve_y needs epsilon > 0");
  if (!(tol > 0.0)) throw InvalidArgument("solve_y needs tol > 0");
  // The gap is negative on (0, y) and positive on (y, 1]; halve from 1/2 until
  // the sign flips to get a bracket [lo, 2 lo].
  double hi = 1.0;
  double lo = 0.5;
  while (survival_gap(epsilon, lo) >= 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < 1e-300) throw InvalidArgument("solve_y: epsilon too small to bracket the root");
  }
  double best = lo;
  double best_gap = std::abs(survival_gap(epsilon, lo));
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gap = survival_gap(epsilon, mid);
    if (std::abs(gap) < best_gap) {
      best = mid;
      best_gap = std::abs(gap);
    }
    if (gap < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return SurvivalPoint{epsilon, best, best_gap};
}

SurvivalEstimate gw_survival_mc(std::uint64_t n, double p, std::uint64_t explode_at, std::uint64_t trials,
                                std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("offspring probability must lie in [0,1]");
  if (explode_at < 1000) throw InvalidArgument("explode_at must be at least 1000");
  if (trials == 0) throw InvalidArgument("need at least one trial");
  SurvivalEstimate est;
  est.trials = trials;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    std::mt19937_64 rng(seed + trial);
    std::uint64_t alive = 1;
    std::uint64_t total = 1;
    while (alive > 0 && total < explode_at) {
      // The next generation is a sum of `alive` independent Bin(n, p).
      std::binomial_distribution<std::uint64_t> offspring(n * alive, p);
      alive = offspring(rng);
      total += alive;
    }
    if (total >= explode_at) ++est.survived;
  }
  est.estimate = static_cast<double>(est.survived) / static_cast<double>(trials);
  est.standard_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(trials));
  return est;
}

double big_component_scale(double d, int k) { return std::pow(d, k / 6.0); }

// --------------------------------------------------------- star powers

int star_power_leaves(const ProductGraph& g) {
  int s = -1;
  for (const auto& f : g.factors()) {
    const int leaves = f.n() - 1;
    bool is_star = leaves >= 1 && f.degree(0) == leaves;
    for (int v = 1; is_star && v < f.n(); ++v) is_star = f.degree(v) == 1;
    if (!is_star) throw UnsupportedOperation("factor " + f.label() + " is not a star with centre 0");
    if (s >= 0 && s != leaves) throw UnsupportedOperation("star power needs equal leaf counts");
    s = leaves;
  }
  return s;
}

int layer_of(const ProductGraph& g, VertexId v) {
  star_power_leaves(g);
  auto coords = g.decode(v);
  return static_cast<int>(std::count(coords.begin(), coords.end(), 0));
}

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  if (r > std::numeric_limits<std::uint64_t>::max()) throw SizeLimitError("binomial coefficient overflows 64 bits");
  return static_cast<std::uint64_t>(r);
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  if (r > std::numeric_limits<std::uint64_t>::max()) throw SizeLimitError("layer size overflows 64 bits");
  return static_cast<std::uint64_t>(r);
}

}  // namespace

LayerCensus layer_census(int t, int s) {
  if (t < 1 || s < 1) throw InvalidArgument("layer census needs t >= 1 and s >= 1");
  LayerCensus lc{t, s, {}, {}};
  for (int z = 0; z <= t; ++z) {
    std::uint64_t size = binomial(t, z);
    for (int k = 0; k < t - z; ++k) size = checked_mul(size, static_cast<std::uint64_t>(s));
    lc.sizes.push_back(size);
    lc.degree.push_back(static_cast<std::uint64_t>(z) * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(t - z));
  }
  return lc;
}

LayerCensus layer_census_enumerated(int t, int s) {
  if (t < 1 || s < 1) throw InvalidArgument("layer census needs t >= 1 and s >= 1");
  ProductGraph g(std::vector<BaseGraph>(static_cast<std::size_t>(t), star(s)));
  LayerCensus lc{t, s, std::vector<std::uint64_t>(static_cast<std::size_t>(t) + 1, 0), {}};
  for (std::uint64_t c = 0; c < g.vertex_count(); ++c) ++lc.sizes[static_cast<std::size_t>(layer_of(g, VertexId{c}))];
  for (int z = 0; z <= t; ++z) {
    lc.degree.push_back(static_cast<std::uint64_t>(z) * static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(t - z));
  }
  return lc;
}

LayerDegrees layer_degrees(const ProductGraph& g, VertexId v) {
  const int z = layer_of(g, v);
  LayerDegrees out;
  for (VertexId w : g.neighbors(v)) {
    const int zw = layer_of(g, w);
    if (zw == z - 1) ++out.down;
    if (zw == z + 1) ++out.up;
  }
  return out;
}

const char* to_string(Dist2Class c) {
  switch (c) {
    case Dist2Class::T1:
      return "T1";
    case Dist2Class::T2:
      return "T2";
    case Dist2Class::NotDist2:
      return "NotDist2";
  }
  return "?";
}

Dist2Class classify_dist2(const ProductGraph& g, VertexId u, VertexId v) {
  star_power_leaves(g);
  const auto cu = g.decode(u);
  const auto cv = g.decode(v);
  std::vector<std::size_t> only_u;
  std::vector<std::size_t> only_v;
  int zu = 0;
  int zv = 0;
  for (std::size_t i = 0; i < cu.size(); ++i) {
    zu += cu[i] == 0;
    zv += cv[i] == 0;
    if (cu[i] == 0 && cv[i] != 0) only_u.push_back(i);
    if (cv[i] == 0 && cu[i] != 0) only_v.push_back(i);
  }
  if (zu != zv) throw InvalidArgument("classify_dist2 needs both vertices in the same layer");
  if (only_u.empty()) {
    // Same centre set: differences are leaf coordinates outside I.
    int differing = 0;
    for (std::size_t i = 0; i < cu.size(); ++i) differing += cu[i] != cv[i];
    return differing == 1 ? Dist2Class::T1 : Dist2Class::NotDist2;
  }
  if (only_u.size() != 1) return Dist2Class::NotDist2;
  for (std::size_t i = 0; i < cu.size(); ++i) {
    if (i == only_u[0] || i == only_v[0]) continue;
    if (cu[i] != cv[i]) return Dist2Class::NotDist2;
  }
  return Dist2Class::T2;
}

// ------------------------------------------------ Hamming and Johnson

ProductGraph hamming(int t, int s) {
  if (t < 1 || s < 1) throw InvalidArgument("hamming needs t >= 1 and s >= 1");
  return ProductGraph(std::vector<BaseGraph>(static_cast<std::size_t>(t), complete(s)));
}

JohnsonGraph::JohnsonGraph(int t, int z) : t_(t), z_(z) {
  if (t >= 64) throw SizeLimitError("johnson graph limited to t < 64");
  if (z <= 0 || z >= t) throw InvalidArgument("johnson graph needs 0 < z < t");
  if (binomial(t, z) > kMaxJohnsonVertices) throw SizeLimitError("johnson graph exceeds 10^6 vertices");
  // Increasing masks with z bits set enumerate z-sets in colex order.
  const std::uint64_t limit = std::uint64_t{1} << t;
  for (std::uint64_t mask = (std::uint64_t{1} << z) - 1; mask < limit;) {
    index_.emplace(mask, static_cast<std::uint32_t>(sets_.size()));
    sets_.push_back(mask);
    const std::uint64_t low = mask & -mask;
    const std::uint64_t ripple = mask + low;
    mask = (((ripple ^ mask) >> 2) / low) | ripple;
  }
  adj_.resize(sets_.size());
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    const std::uint64_t mask = sets_[i];
    for (int in = 0; in < t; ++in) {
      if (!((mask >> in) & 1)) continue;
      for (int out = 0; out < t; ++out) {
        if ((mask >> out) & 1) continue;
        adj_[i].push_back(index_.at(mask ^ (std::uint64_t{1} << in) ^ (std::uint64_t{1} << out)));
      }
    }
    std::sort(adj_[i].begin(), adj_[i].end());
  }
}

std::size_t JohnsonGraph::index_of(std::uint64_t mask) const {
  auto it = index_.find(mask);
  if (it == index_.end()) throw InvalidArgument("mask is not a vertex of this johnson graph");
  return it->second;
}

JohnsonGraph johnson(int t, int z) { return JohnsonGraph(t, z); }

std::vector<std::uint32_t> johnson_neighborhood(const JohnsonGraph& j, const std::vector<std::uint32_t>& a) {
  std::vector<bool> in_a(j.vertex_count(), false);
  for (auto v : a) in_a.at(v) = true;
  std::vector<bool> hit(j.vertex_count(), false);
  std::vector<std::uint32_t> out;
  for (auto v : a) {
    for (auto w : j.neighbors(v)) {
      if (!in_a[w] && !hit[w]) {
        hit[w] = true;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --------------------------------------------- isoperimetric sandwich

IsoSandwich iso_sandwich_check(const std::vector<BaseGraph>& factors) {
  if (factors.empty()) throw InvalidArgument("sandwich check needs at least one factor");
  for (const auto& f : factors) {
    if (f.trivial()) throw InvalidArgument("sandwich check needs non-trivial factors");
  }
  ProductGraph g(factors);
  if (g.vertex_count() > static_cast<std::uint64_t>(kMaxIsoperimetricVertices)) {
    throw SizeLimitError("sandwich check needs a product of at most 24 vertices");
  }
  IsoSandwich out;
  out.product_value = brute_force_isoperimetric(materialize(g));
  out.upper = brute_force_isoperimetric(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) out.upper = std::min(out.upper, brute_force_isoperimetric(factors[i]));
  out.lower = out.upper * Rational(1, 2);
  out.ok = out.lower <= out.product_value && out.product_value <= out.upper;
  return out;
}

// ------------------------------------------------ component statistics

BigComponentStats big_component_stats(const CensusResult& c, std::uint64_t k) {
  BigComponentStats out;
  out.threshold = k;
  for (auto size : c.component_sizes) {
    if (size >= k) out.w_size += size;
  }
  out.fraction = c.vertex_count == 0 ? 0.0 : static_cast<double>(out.w_size) / static_cast<double>(c.vertex_count);
  return out;
}

double near_big_fraction(const ProductGraph& g, const EdgeSampler& s, std::uint64_t k, int degree_floor) {
  std::vector<std::uint32_t> labels;
  census(g, s, &labels);
  std::vector<std::uint64_t> sizes;
  for (auto label : labels) {
    if (label >= sizes.size()) sizes.resize(label + 1, 0);
    ++sizes[label];
  }
  auto big = [&](VertexId v) { return sizes[labels[v.code]] >= k; };

  std::uint64_t eligible = 0;
  std::uint64_t far = 0;
  for (std::uint64_t c = 0; c < g.vertex_count(); ++c) {
    const VertexId v{c};
    if (g.degree(v) < degree_floor) continue;
    ++eligible;
    bool near = big(v);
    for (VertexId w : g.neighbors(v)) {
      if (near) break;
      near = big(w);
      if (near) break;
      g.for_each_neighbor(w, [&](VertexId x) { near = near || big(x); });
    }
    if (!near) ++far;
  }
  return eligible == 0 ? 0.0 : static_cast<double>(far) / static_cast<double>(eligible);
}

}  // namespace prodperc
