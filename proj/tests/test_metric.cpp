#include <doctest.h>

#include "hhs/errors.hpp"
#include "hhs/metric.hpp"
#include "oracles.hpp"

using namespace hhs;

TEST_CASE("length arithmetic is exact") {
  Length h = Length::ratio(1, 2);
  CHECK(h + h == Length::units(1));
  CHECK(Length::parse("3/4") + Length::parse("1/4") == Length::units(1));
  CHECK(Length::parse("0.5") == h);
  CHECK(Length::units(7).div_ceil(Length::units(2)) == Length::ratio(7, 2));
  CHECK(h.str() == "1/2");
  CHECK_THROWS(Length::ratio(1, 7919));
  nlohmann::json j = Length::units(3);
  CHECK(j.dump() == "3");
  j = Length::ratio(3, 2);
  CHECK(j.get<Length>() == Length::ratio(3, 2));
}

TEST_CASE("dist on small graphs") {
  auto p = oracle::path(2);
  CHECK(p.d(0, 2) == Length::units(2));
  CHECK(p.d(1, 1) == Length::units(0));

  GraphBuilder b;
  b.add_vertex("a");
  b.add_vertex("b");
  auto g = b.build();
  CHECK_FALSE(g.connected());
  CHECK_FALSE(g.dist(0, 1).has_value());
  CHECK_THROWS_AS(g.d(0, 1), UnreachableError);
}

TEST_CASE("dist matches Floyd-Warshall on random graphs") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    for (bool weighted : {false, true}) {
      auto g = oracle::random_connected(30, 25, seed, weighted);
      auto fw = oracle::floyd_warshall(g);
      for (int u = 0; u < 30; ++u)
        for (int v = 0; v < 30; ++v) CHECK(g.dt(u, v) == fw[u][v]);
    }
  }
}

TEST_CASE("sparse oracle agrees with dense table") {
  auto g = oracle::random_connected(60, 40, 9, true);
  auto dense = oracle::floyd_warshall(g);
  std::size_t old = FiniteMetricGraph::dense_budget();
  FiniteMetricGraph::set_dense_budget(10);
  GraphBuilder b;
  for (std::size_t v = 0; v < g.size(); ++v) b.add_vertex(g.id(static_cast<Vertex>(v)));
  for (std::size_t v = 0; v < g.size(); ++v)
    for (const Arc& a : g.neighbors(static_cast<Vertex>(v))) b.add_edge(static_cast<Vertex>(v), a.to, Length::from_ticks(a.w));
  auto sparse = b.build();
  FiniteMetricGraph::set_dense_budget(old);
  CHECK_FALSE(sparse.dense());
  for (int u = 0; u < 60; u += 7)
    for (int v = 0; v < 60; ++v) CHECK(sparse.dt(u, v) == dense[u][v]);
}

TEST_CASE("metric axioms on random triples") {
  auto g = oracle::random_connected(40, 30, 3, true);
  Rng rng(5);
  for (int k = 0; k < 500; ++k) {
    int x = static_cast<int>(rng.below(40)), y = static_cast<int>(rng.below(40)), z = static_cast<int>(rng.below(40));
    CHECK(g.d(x, y) == g.d(y, x));
    CHECK(g.d(x, z) <= g.d(x, y) + g.d(y, z));
  }
}

TEST_CASE("interval") {
  auto t = oracle::random_tree(25, 4);
  auto fw = oracle::floyd_warshall(t);
  VertexSet iv = interval(t, 3, 17);
  CHECK(static_cast<std::int64_t>(iv.size()) == fw[3][17] / Length::kScale + 1);

  auto c4 = oracle::cycle(4);
  CHECK(interval(c4, 0, 2).size() == 4);
  CHECK(interval(c4, 1, 1) == VertexSet{1});

  auto g = oracle::random_connected(35, 30, 8);
  for (int u = 0; u < 35; u += 5)
    for (int v = 0; v < 35; v += 3) {
      VertexSet uv = interval(g, u, v);
      CHECK(contains(uv, u));
      CHECK(contains(uv, v));
      for (Vertex x : uv) {
        VertexSet ux = interval(g, u, x);
        CHECK(std::includes(uv.begin(), uv.end(), ux.begin(), ux.end()));
      }
    }
}

TEST_CASE("hausdorff") {
  auto p = oracle::path(2);
  CHECK(hausdorff(p, {0}, {0, 1, 2}) == Length::units(2));
  CHECK(hausdorff(p, {1}, {1}) == Length::units(0));
  CHECK_THROWS(hausdorff(p, {}, {1}));

  auto g = oracle::random_connected(30, 20, 11, true);
  auto fw = oracle::floyd_warshall(g);
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    VertexSet a, b;
    for (std::size_t i : rng.sample(30, 1 + rng.below(6))) a.push_back(static_cast<Vertex>(i));
    for (std::size_t i : rng.sample(30, 1 + rng.below(6))) b.push_back(static_cast<Vertex>(i));
    std::int64_t h = 0;
    for (Vertex x : a) {
      std::int64_t m = oracle::kInf;
      for (Vertex y : b) m = std::min(m, fw[x][y]);
      h = std::max(h, m);
    }
    for (Vertex y : b) {
      std::int64_t m = oracle::kInf;
      for (Vertex x : a) m = std::min(m, fw[x][y]);
      h = std::max(h, m);
    }
    CHECK(hausdorff(g, a, b).ticks() == h);
  }
}

TEST_CASE("gromov delta") {
  CHECK(gromov_delta(oracle::random_tree(60, 1)).delta == Length::units(0));
  GraphBuilder one;
  one.add_vertex("x");
  CHECK(gromov_delta(one.build()).delta == Length::units(0));

  auto c6 = oracle::cycle(6);
  CHECK(gromov_delta(c6).delta.ticks() == oracle::brute_delta_ticks(oracle::floyd_warshall(c6)));

  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto g = oracle::random_connected(22, 12, seed, seed % 2 == 0);
    CHECK(gromov_delta(g).delta.ticks() == oracle::brute_delta_ticks(oracle::floyd_warshall(g)));
  }
  auto gr = oracle::grid(4, 5);
  CHECK(gromov_delta(gr).delta.ticks() == oracle::brute_delta_ticks(oracle::floyd_warshall(gr)));
}

TEST_CASE("gromov delta recomputed after a pendant edge") {
  auto g = oracle::random_connected(18, 10, 21);
  GraphBuilder b;
  for (std::size_t v = 0; v < g.size(); ++v) b.add_vertex(g.id(static_cast<Vertex>(v)));
  for (std::size_t v = 0; v < g.size(); ++v)
    for (const Arc& a : g.neighbors(static_cast<Vertex>(v))) b.add_edge(static_cast<Vertex>(v), a.to);
  b.add_vertex("pendant");
  b.add_edge(18, 4);
  auto g2 = b.build();
  CHECK(gromov_delta(g2).delta.ticks() == oracle::brute_delta_ticks(oracle::floyd_warshall(g2)));
}

TEST_CASE("sampled delta reports its pool") {
  auto g = oracle::grid(8, 8);
  DeltaOptions opt;
  opt.exhaustive_limit = 10;
  opt.sample_pool = 20;
  auto e = gromov_delta(g, opt);
  CHECK_FALSE(e.exhaustive);
  CHECK(e.pool == 20);
  CHECK(e.delta <= gromov_delta(g).delta);
}

TEST_CASE("quasiconvexity") {
  auto g = oracle::grid(6, 6);
  CHECK(is_quasiconvex(g, all_vertices(g), Length::units(0)).ok);
  VertexSet row;
  for (int i = 0; i < 6; ++i) row.push_back(g.at(oracle::cell(i, 2)));
  CHECK(is_quasiconvex(g, normalized(row), Length::units(0)).ok);

  VertexSet diag;
  for (int i = 0; i < 6; ++i) diag.push_back(g.at(oracle::cell(i, i)));
  diag = normalized(diag);
  // farthest box point from the diagonal, by brute force
  auto fw = oracle::floyd_warshall(g);
  std::int64_t far = 0;
  for (std::size_t z = 0; z < g.size(); ++z) {
    std::int64_t m = oracle::kInf;
    for (Vertex y : diag) m = std::min(m, fw[z][y]);
    far = std::max(far, m);
  }
  CHECK(far == Length::units(5).ticks());
  auto r4 = is_quasiconvex(g, diag, Length::units(4));
  CHECK_FALSE(r4.ok);
  CHECK(r4.witness.has_value());
  CHECK(is_quasiconvex(g, diag, Length::units(5)).ok);

  Rng rng(3);
  auto h = oracle::random_connected(30, 15, 4);
  for (int t = 0; t < 10; ++t) {
    VertexSet y;
    for (std::size_t i : rng.sample(30, 2 + rng.below(5))) y.push_back(static_cast<Vertex>(i));
    Length rad = hausdorff(h, y, all_vertices(h));
    CHECK(is_quasiconvex(h, y, rad).ok);
  }
}

TEST_CASE("qi_fit") {
  std::vector<DistancePair> same, twice;
  for (int k = 0; k <= 10; ++k) {
    same.push_back({Length::units(k), Length::units(k)});
    twice.push_back({Length::units(k), Length::units(2 * k)});
  }
  QiFit a = qi_fit(same);
  CHECK(a.lambda == Length::units(1));
  CHECK(a.epsilon == Length::units(0));
  QiFit b = qi_fit(twice);
  CHECK(b.lambda == Length::units(2));
  CHECK(b.epsilon == Length::units(0));
  CHECK(qi_fit_holds(b, twice));

  // capped distances: d2 = min(d1, 2); grid search by hand
  std::vector<DistancePair> capped;
  for (int k = 0; k <= 9; ++k) capped.push_back({Length::units(k), Length::units(std::min(k, 2))});
  QiFit c = qi_fit(capped);
  CHECK(qi_fit_holds(c, capped));
  Length bestsum = Length::units(1000);
  for (int k = 8; k <= 8 * 9; ++k) {
    Length lam = Length::ratio(k, 8);
    Length eps;
    for (auto& p : capped) {
      eps = max(eps, p.d2 - p.d1.times(lam));
      Length back = p.d1 - p.d2.times(lam);
      if (back.ticks() > 0) eps = max(eps, back.div_ceil(lam));
    }
    bestsum = min(bestsum, lam + eps);
  }
  CHECK(c.lambda + c.epsilon == bestsum);
}

TEST_CASE("geodesic is lexicographically least") {
  auto c4 = oracle::cycle(4);
  CHECK(geodesic(c4, 0, 2) == std::vector<Vertex>{0, 1, 2});
  auto g = oracle::grid(3, 3);
  auto path = geodesic(g, g.at("0,0"), g.at("2,2"));
  CHECK(path.size() == 5);
}
