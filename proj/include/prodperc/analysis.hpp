#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "prodperc/basegraphs.hpp"
#include "prodperc/percolation.hpp"
#include "prodperc/product.hpp"
#include "prodperc/rational.hpp"

namespace prodperc {

// ------------------------------------------------------------ survival

// Root of y = 1 - exp(-(1+eps) y) in (0,1).
struct SurvivalPoint {
  double epsilon = 0.0;
  double y = 0.0;
  double residual = 0.0;
};

SurvivalPoint solve_y(double epsilon, double tol = 1e-12);

struct SurvivalEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t survived = 0;
  std::uint64_t trials = 0;
};

inline constexpr std::uint64_t kDefaultExplodeAt = 20000;

// Monte Carlo survival of a Galton-Watson process with Bin(n, p) offspring.
// A trial "survives" once its total population reaches explode_at. Trial i
// draws from its own generator seeded with seed + i.
SurvivalEstimate gw_survival_mc(std::uint64_t n, double p, std::uint64_t explode_at, std::uint64_t trials,
                                std::uint64_t seed);

// d^{k/6}, the default big-component scale used by the experiments.
double big_component_scale(double d, int k);

// --------------------------------------------------------- star powers

// Leaf count s when every factor is star(s) with the centre at index 0.
// Throws UnsupportedOperation otherwise.
int star_power_leaves(const ProductGraph& g);

// Number of centre coordinates of v.
int layer_of(const ProductGraph& g, VertexId v);

struct LayerCensus {
  int t = 0;
  int s = 0;
  std::vector<std::uint64_t> sizes;   // |M_z|, z = 0..t
  std::vector<std::uint64_t> degree;  // zs + (t - z)
};

LayerCensus layer_census(int t, int s);
// Same counts by decoding every vertex of star(s)^t.
LayerCensus layer_census_enumerated(int t, int s);

// Neighbour counts of v in the layers directly below and above its own.
struct LayerDegrees {
  int down = 0;
  int up = 0;
};

LayerDegrees layer_degrees(const ProductGraph& g, VertexId v);

enum class Dist2Class { T1, T2, NotDist2 };

const char* to_string(Dist2Class c);

// Distance-two classification of two vertices of the same layer by the
// centre sets I, K and the leaf coordinates.
Dist2Class classify_dist2(const ProductGraph& g, VertexId u, VertexId v);

// ------------------------------------------------ Hamming and Johnson

// K_s^t.
ProductGraph hamming(int t, int s);

inline constexpr std::uint64_t kMaxJohnsonVertices = 1'000'000;

class JohnsonGraph {
 public:
  JohnsonGraph(int t, int z);

  int t() const noexcept { return t_; }
  int z() const noexcept { return z_; }
  std::size_t vertex_count() const noexcept { return sets_.size(); }
  // Vertex i as a bitmask over [t], colex order.
  std::uint64_t set(std::size_t i) const { return sets_.at(i); }
  std::size_t index_of(std::uint64_t mask) const;
  const std::vector<std::uint32_t>& neighbors(std::size_t i) const { return adj_.at(i); }

 private:
  int t_;
  int z_;
  std::vector<std::uint64_t> sets_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::vector<std::uint32_t>> adj_;
};

JohnsonGraph johnson(int t, int z);
// External neighbourhood N(A), sorted.
std::vector<std::uint32_t> johnson_neighborhood(const JohnsonGraph& j, const std::vector<std::uint32_t>& a);

// --------------------------------------------- isoperimetric sandwich

struct IsoSandwich {
  Rational product_value;
  Rational lower;
  Rational upper;
  bool ok = false;
};

IsoSandwich iso_sandwich_check(const std::vector<BaseGraph>& factors);

// ------------------------------------------------ component statistics

struct BigComponentStats {
  std::uint64_t threshold = 0;
  std::uint64_t w_size = 0;
  double fraction = 0.0;
};

BigComponentStats big_component_stats(const CensusResult& c, std::uint64_t k);

// Among vertices of degree >= degree_floor, the fraction with no vertex of a
// component of order >= k within graph distance two.
double near_big_fraction(const ProductGraph& g, const EdgeSampler& s, std::uint64_t k, int degree_floor);

}  // namespace prodperc
