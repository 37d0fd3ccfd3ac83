#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "prodperc/errors.hpp"
#include "prodperc/product.hpp"

using namespace prodperc;

namespace {

std::vector<BaseGraph> repeat(const BaseGraph& g, int times) {
  return std::vector<BaseGraph>(static_cast<std::size_t>(times), g);
}

std::vector<VertexId> collect(const NeighborRange& range) {
  std::vector<VertexId> out;
  for (VertexId w : range) out.push_back(w);
  return out;
}

ProductGraph random_product(std::mt19937_64& rng, int max_factors, int max_factor_size) {
  std::vector<BaseGraph> factors;
  const int count = std::uniform_int_distribution<int>(1, max_factors)(rng);
  for (int i = 0; i < count; ++i) {
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
      case 0:
        factors.push_back(complete(std::uniform_int_distribution<int>(1, max_factor_size)(rng)));
        break;
      case 1:
        factors.push_back(star(std::uniform_int_distribution<int>(1, max_factor_size - 1)(rng)));
        break;
      case 2:
        factors.push_back(path(std::uniform_int_distribution<int>(1, max_factor_size)(rng)));
        break;
      case 3:
        factors.push_back(cycle(std::uniform_int_distribution<int>(3, std::max(3, max_factor_size))(rng)));
        break;
      default:
        factors.push_back(star_clique(2, std::uniform_int_distribution<int>(0, 1)(rng)));
        break;
    }
  }
  return ProductGraph(std::move(factors));
}

VertexId random_vertex(const ProductGraph& g, std::mt19937_64& rng) {
  return VertexId{std::uniform_int_distribution<std::uint64_t>(0, g.vertex_count() - 1)(rng)};
}

}  // namespace

TEST_CASE("build: vertex counts and codec tables") {
  for (int t = 1; t <= 20; ++t) {
    auto q = build(repeat(complete(2), t));
    CHECK(q.vertex_count() == (std::uint64_t{1} << t));
    CHECK(q.dimension() == t);
  }
  for (int s = 1; s <= 5; ++s) {
    for (int t = 1; t <= 5; ++t) {
      std::uint64_t expected = 1;
      for (int i = 0; i < t; ++i) expected *= static_cast<std::uint64_t>(s + 1);
      CHECK(build(repeat(star(s), t)).vertex_count() == expected);
    }
  }
  for (int t = 1; t <= 6; ++t) {
    auto factors = repeat(complete(2), t - 1);
    factors.push_back(star_clique(7, 3));
    auto g = build(factors);
    CHECK(g.vertex_count() == (std::uint64_t{1} << (t - 1)) * 7 * 4);
  }

  auto g = build({complete(3), star(2), complete(1), path(4)});
  CHECK(g.strides() == std::vector<std::uint64_t>{1, 3, 9, 9});
  CHECK(g.dimension() == 3);
  CHECK(g.vertex_count() == 36);

  CHECK_THROWS_AS(build(repeat(complete(2), 28)), SizeLimitError);
  CHECK_NOTHROW(build(repeat(complete(2), 27)));
  CHECK_THROWS_AS(build({}), InvalidArgument);
}

TEST_CASE("encode and decode") {
  auto q3 = build(repeat(complete(2), 3));
  CHECK(q3.encode(std::vector<int>{0, 0, 0}).code == 0);
  CHECK(q3.encode(std::vector<int>{1, 0, 1}).code == 5);
  CHECK(q3.decode(VertexId{5}) == std::vector<int>{1, 0, 1});
  CHECK_THROWS_AS(q3.encode(std::vector<int>{2, 0, 0}), InvalidArgument);
  CHECK_THROWS_AS(q3.encode(std::vector<int>{0, 0}), InvalidArgument);
  CHECK_THROWS_AS(q3.decode(VertexId{8}), InvalidArgument);

  std::mt19937_64 rng(5);
  auto g = build({star(4), complete(3), path(6), star_clique(3, 2)});
  for (int i = 0; i < 100000; ++i) {
    std::vector<int> coords;
    for (std::size_t f = 0; f < g.factor_count(); ++f) {
      coords.push_back(std::uniform_int_distribution<int>(0, g.factor(f).n() - 1)(rng));
    }
    const auto v = g.encode(coords);
    REQUIRE(g.decode(v) == coords);
    for (std::size_t f = 0; f < coords.size(); ++f) REQUIRE(g.coordinate(v, f) == coords[f]);
  }
}

TEST_CASE("neighbors: degrees") {
  for (int t = 1; t <= 10; ++t) {
    auto q = build(repeat(complete(2), t));
    for (std::uint64_t c = 0; c < q.vertex_count(); c += 7) CHECK(q.degree(VertexId{c}) == t);
  }

  // star power: a vertex with z centre coordinates has degree zs + (t - z)
  const int s = 3;
  const int t = 5;
  auto sp = build(repeat(star(s), t));
  for (std::uint64_t c = 0; c < sp.vertex_count(); ++c) {
    const auto coords = sp.decode(VertexId{c});
    const int z = static_cast<int>(std::count(coords.begin(), coords.end(), 0));
    REQUIRE(static_cast<int>(collect(sp.neighbors(VertexId{c})).size()) == z * s + (t - z));
  }

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_product(rng, 5, 6);
    for (int i = 0; i < 500; ++i) {
      const auto v = random_vertex(g, rng);
      const auto coords = g.decode(v);
      int expected = 0;
      for (std::size_t f = 0; f < coords.size(); ++f) expected += g.factor(f).degree(coords[f]);
      auto nb = collect(g.neighbors(v));
      REQUIRE(static_cast<int>(nb.size()) == expected);
      REQUIRE(g.degree(v) == expected);
      std::set<VertexId> unique(nb.begin(), nb.end());
      REQUIRE(unique.size() == nb.size());
      REQUIRE(unique.count(v) == 0);
    }
  }
}

TEST_CASE("neighbor range matches the visitor, factor-major order") {
  auto g = build({star(3), complete(3), path(4)});
  for (std::uint64_t c = 0; c < g.vertex_count(); ++c) {
    std::vector<VertexId> visited;
    g.for_each_neighbor(VertexId{c}, [&](VertexId w) { visited.push_back(w); });
    REQUIRE(collect(g.neighbors(VertexId{c})) == visited);
  }
  // (1,1,1) in star(3) x K3 x P4: centre first, then K3 neighbours 0,2, then path 0,2.
  const auto v = g.encode(std::vector<int>{1, 1, 1});
  std::vector<std::uint64_t> codes;
  for (VertexId w : g.neighbors(v)) codes.push_back(w.code);
  CHECK(codes == std::vector<std::uint64_t>{v.code - 1, v.code - 4, v.code + 4, v.code - 12, v.code + 12});
}

TEST_CASE("adjacency is symmetric") {
  std::mt19937_64 rng(23);
  auto g = build({star(5), complete(4), cycle(5), star_clique(3, 2), path(3)});
  for (int i = 0; i < 100000; ++i) {
    const auto v = random_vertex(g, rng);
    auto nb = collect(g.neighbors(v));
    const auto u = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
    auto back = collect(g.neighbors(u));
    REQUIRE(std::find(back.begin(), back.end(), v) != back.end());
    // and a random non-neighbour does not see v
    const auto x = random_vertex(g, rng);
    const bool x_in_v = std::find(nb.begin(), nb.end(), x) != nb.end();
    auto xs = collect(g.neighbors(x));
    REQUIRE(x_in_v == (std::find(xs.begin(), xs.end(), v) != xs.end()));
  }
}

TEST_CASE("average degree") {
  for (int t = 1; t <= 12; ++t) CHECK(build(repeat(complete(2), t)).average_degree() == Rational(t));
  for (int s = 1; s <= 6; ++s) {
    for (int t = 1; t <= 6; ++t) {
      CHECK(build(repeat(star(s), t)).average_degree() == Rational(2 * s * t, s + 1));
    }
  }
  for (int t = 1; t <= 4; ++t) {
    const int r = 5;
    const int s = 3;
    auto factors = repeat(complete(2), t - 1);
    factors.push_back(star_clique(r, s));
    auto g = build(factors);
    const Rational expected = Rational(t - 1) + Rational(2 * s + r - 1, s + 1);
    CHECK(g.average_degree() == expected);
    std::int64_t sweep = 0;
    for (std::uint64_t c = 0; c < g.vertex_count(); ++c) sweep += g.degree(VertexId{c});
    CHECK(Rational(sweep, static_cast<std::int64_t>(g.vertex_count())) == expected);
    CHECK(sweep == 2 * g.edge_count());
  }

  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    auto g = random_product(rng, 4, 5);
    std::int64_t sweep = 0;
    for (std::uint64_t c = 0; c < g.vertex_count(); ++c) sweep += g.degree(VertexId{c});
    CHECK(g.average_degree() * Rational(static_cast<std::int64_t>(g.vertex_count())) == Rational(sweep));
  }
}

TEST_CASE("degree is Lipschitz in graph distance") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_product(rng, 5, 6);
    const int c = g.max_factor_degree();
    for (int i = 0; i < 2000; ++i) {
      const auto v = random_vertex(g, rng);
      for (VertexId w : g.neighbors(v)) REQUIRE(std::abs(g.degree(v) - g.degree(w)) <= c - 1);
      // along a random walk, compared against the endpoint distance
      VertexId cur = v;
      for (int step = 0; step < 6; ++step) {
        auto nb = collect(g.neighbors(cur));
        if (nb.empty()) break;
        cur = nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)];
      }
      if (g.factors_connected()) REQUIRE(std::abs(g.degree(v) - g.degree(cur)) <= (c - 1) * g.distance(v, cur));
    }
  }
}

TEST_CASE("distance") {
  auto q = build(repeat(complete(2), 10));
  std::mt19937_64 rng(41);
  for (int i = 0; i < 1000; ++i) {
    const auto u = random_vertex(q, rng);
    const auto v = random_vertex(q, rng);
    CHECK(q.distance(u, u) == 0);
    CHECK(q.distance(u, v) == std::popcount(u.code ^ v.code));
  }

  // S(1,2)^4 against BFS on the explicit 81-vertex graph
  auto sp = build(repeat(star(2), 4));
  auto explicit_graph = materialize(sp);
  REQUIRE(explicit_graph.n() == 81);
  for (int i = 0; i < 81; ++i) {
    auto dist = bfs_distances(explicit_graph, i);
    for (int j = 0; j < 81; ++j) {
      REQUIRE(sp.distance(VertexId{static_cast<std::uint64_t>(i)}, VertexId{static_cast<std::uint64_t>(j)}) ==
              dist[static_cast<std::size_t>(j)]);
    }
  }

  // Large factor falls back to per-query BFS.
  auto big = build({complete(2), star_clique(60, 40)});
  REQUIRE(big.factor(1).n() > kMaxTabulatedFactor);
  const auto a = big.encode(std::vector<int>{0, 60});            // leaf of clique vertex 0
  const auto b = big.encode(std::vector<int>{1, 60 + 59 * 40});  // leaf of clique vertex 59
  CHECK(big.distance(a, b) == 1 + 3);

  auto disconnected = build({complete(2), from_edge_list(3, {{0, 1}})});
  CHECK_THROWS_AS(disconnected.distance(VertexId{0}, VertexId{1}), UnsupportedOperation);
}

TEST_CASE("projection cover: small cases") {
  auto q = build(repeat(complete(2), 5));
  std::vector<VertexId> one{VertexId{13}};
  auto cover1 = projection_cover(q, one);
  REQUIRE(cover1.size() == 1);
  CHECK(cover1[0].first == q.full_projection());
  CHECK(cover1[0].second == VertexId{13});

  // differ only in coordinate 2
  std::vector<VertexId> two{q.encode(std::vector<int>{1, 0, 0, 1, 1}), q.encode(std::vector<int>{1, 0, 1, 1, 1})};
  auto cover2 = projection_cover(q, two);
  REQUIRE(cover2.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& proj = cover2[k].first;
    for (std::size_t i = 0; i < 5; ++i) CHECK(proj.fixed[i].has_value() == (i == 2));
    CHECK(q.projection_dimension(proj) == 4);
    CHECK(q.contains(proj, two[k]));
  }
  CHECK(projections_disjoint(cover2[0].first, cover2[1].first));

  CHECK(projection_cover(q, std::vector<VertexId>{}).empty());
  std::vector<VertexId> six{VertexId{0}, VertexId{1}, VertexId{2}, VertexId{3}, VertexId{4}, VertexId{5}};
  CHECK_THROWS_AS(projection_cover(q, six), InvalidArgument);
  std::vector<VertexId> dup{VertexId{3}, VertexId{3}};
  CHECK_THROWS_AS(projection_cover(q, dup), InvalidArgument);
}

TEST_CASE("projection cover: randomized postconditions") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 500; ++trial) {
    auto g = random_product(rng, 6, 4);
    if (g.dimension() == 0) continue;
    const int m = std::uniform_int_distribution<int>(1, g.dimension())(rng);
    std::set<VertexId> chosen;
    while (static_cast<int>(chosen.size()) < m && chosen.size() < g.vertex_count()) chosen.insert(random_vertex(g, rng));
    std::vector<VertexId> M(chosen.begin(), chosen.end());
    std::shuffle(M.begin(), M.end(), rng);
    auto cover = projection_cover(g, M);
    REQUIRE(cover.size() == M.size());
    for (std::size_t a = 0; a < cover.size(); ++a) {
      REQUIRE(cover[a].second == M[a]);
      REQUIRE(g.projection_dimension(cover[a].first) >= g.dimension() - static_cast<int>(M.size()) + 1);
      int members = 0;
      for (VertexId v : M) members += g.contains(cover[a].first, v);
      REQUIRE(members == 1);
      for (std::size_t b = a + 1; b < cover.size(); ++b) REQUIRE(projections_disjoint(cover[a].first, cover[b].first));
    }
    // literal disjointness on small instances
    if (g.vertex_count() <= 2000) {
      for (std::uint64_t c = 0; c < g.vertex_count(); ++c) {
        int owners = 0;
        for (const auto& [proj, v] : cover) owners += g.contains(proj, VertexId{c});
        REQUIRE(owners <= 1);
      }
    }
  }
}

TEST_CASE("restricted neighbours") {
  std::mt19937_64 rng(47);
  auto g = build({star(3), complete(4), path(3), cycle(5)});
  for (int i = 0; i < 200; ++i) {
    const auto v = random_vertex(g, rng);
    CHECK(collect(g.restrict_neighbors(g.full_projection(), v)) == collect(g.neighbors(v)));
  }

  auto q3 = build(repeat(complete(2), 3));
  for (std::uint64_t c = 0; c < 8; ++c) {
    Projection proj = q3.full_projection();
    proj.fixed[0] = static_cast<int>(c & 1);
    auto nb = collect(q3.restrict_neighbors(proj, VertexId{c}));
    CHECK(nb.size() == 2);
    for (VertexId w : nb) CHECK(q3.contains(proj, w));
  }

  for (int i = 0; i < 2000; ++i) {
    const auto v = random_vertex(g, rng);
    const auto coords = g.decode(v);
    Projection proj = g.full_projection();
    int expected = 0;
    for (std::size_t f = 0; f < coords.size(); ++f) {
      if (std::bernoulli_distribution(0.5)(rng)) {
        proj.fixed[f] = coords[f];
      } else {
        expected += g.factor(f).degree(coords[f]);
      }
    }
    auto nb = collect(g.restrict_neighbors(proj, v));
    REQUIRE(static_cast<int>(nb.size()) == expected);
    for (VertexId w : nb) REQUIRE(g.contains(proj, w));
  }

  Projection pinned = q3.full_projection();
  pinned.fixed[1] = 1;
  CHECK_THROWS_AS(q3.restrict_neighbors(pinned, VertexId{0}), InvalidArgument);
}

TEST_CASE("product spec parser") {
  auto a = parse_product_spec("K2^19");
  CHECK(a.factors.size() == 19);
  CHECK(build(a.factors).vertex_count() == (std::uint64_t{1} << 19));
  CHECK_FALSE(a.star_leaves.has_value());

  auto b = parse_product_spec("star(8)^6");
  CHECK(b.factors.size() == 6);
  CHECK(b.star_leaves == 8);
  CHECK(b.factors[0].edges() == star(8).edges());

  auto c = parse_product_spec("S(1200,10)");
  REQUIRE(c.factors.size() == 1);
  CHECK(c.factors[0].n() == 1200 * 11);
  CHECK(c.star_leaves == 10);

  auto d = parse_product_spec("K2^5, S(4800,10)");
  CHECK(d.factors.size() == 6);
  CHECK(build(d.factors).vertex_count() == 32ull * 4800 * 11);

  const std::string path = "prodperc_test_triangle.txt";
  {
    std::ofstream out(path);
    out << "3 3\n0 1\n1 2\n0 2\n";
  }
  auto e = parse_product_spec("file:" + path + "^3,K2");
  CHECK(e.factors.size() == 4);
  CHECK(build(e.factors).vertex_count() == 54);
  std::remove(path.c_str());

  CHECK_THROWS_AS(parse_product_spec("Q5"), InvalidArgument);
  CHECK_THROWS_AS(parse_product_spec("K2^x"), InvalidArgument);
  CHECK_THROWS_AS(parse_product_spec("K2,,K2"), InvalidArgument);
  CHECK_THROWS_AS(parse_product_spec("S(3)"), InvalidArgument);
  CHECK_THROWS_AS(parse_product_spec("K2^0"), InvalidArgument);
}
