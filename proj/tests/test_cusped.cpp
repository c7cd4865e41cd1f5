#include <doctest.h>

#include <set>

#include "hhs/cusped.hpp"
#include "hhs/errors.hpp"
#include "hhs/free_group.hpp"
#include "oracles.hpp"

using namespace hhs;

namespace {

// Level graph straight from the definition: (i,k) ~ (i,k+1); (i,k) ~ (j,k) iff 0 < d(i,j) ≤ 2^k.
// With apex_from ≥ 0 an extra vertex joins every vertex at levels ≥ apex_from.
oracle::Adjacency level_graph(const oracle::Table& d, int depth, int apex_from = -1) {
  const int n = static_cast<int>(d.size());
  const std::int64_t one = Length::units(1).ticks();
  oracle::Adjacency adj(static_cast<std::size_t>(n * (depth + 1) + (apex_from >= 0 ? 1 : 0)));
  auto link = [&](int a, int b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };
  for (int k = 0; k <= depth; ++k)
    for (int i = 0; i < n; ++i) {
      if (k < depth) link(k * n + i, (k + 1) * n + i);
      for (int j = i + 1; j < n; ++j)
        if (d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] <= (std::int64_t{1} << k) * one) link(k * n + i, k * n + j);
      if (apex_from >= 0 && k >= apex_from) link(n * (depth + 1), k * n + i);
    }
  return adj;
}

std::int64_t formula(int n) {
  std::int64_t best = n;
  for (int j = 0; (1 << j) <= 2 * n; ++j) best = std::min<std::int64_t>(best, 2 * j + (n + (1 << j) - 1) / (1 << j));
  return best;
}

}  // namespace

TEST_CASE("horoball edges follow the definition") {
  for (const auto& base : {oracle::path(8), oracle::cycle(9), oracle::random_tree(7, 3)}) {
    auto c = horoball(base, 4);
    auto adj = level_graph(oracle::floyd_warshall(base), 4);
    REQUIRE(c.graph.size() == adj.size());
    std::size_t edges = 0;
    for (std::size_t v = 0; v < adj.size(); ++v) {
      std::set<int> want(adj[v].begin(), adj[v].end());
      std::set<int> got;
      for (const Arc& a : c.graph.neighbors(static_cast<Vertex>(v))) got.insert(a.to);
      CHECK(got == want);
      edges += want.size();
    }
    CHECK(c.graph.edge_count() * 2 == edges);
  }
  auto single = horoball(oracle::path(0), 5);
  CHECK(single.graph.size() == 6);
  CHECK(diameter(single.graph) == Length::units(5));
  auto two = horoball(oracle::path(1), 2);
  CHECK(two.graph.edge_count() == 4 + 3);
  CHECK(default_horoball_depth(oracle::path(8)) == 5);
}

TEST_CASE("horoball distances") {
  for (int n : {2, 4, 8, 16, 64, 256}) {
    auto base = oracle::path(n);
    auto c = horoball(base);
    Length got = c.graph.d(0, static_cast<Vertex>(n));
    auto adj = level_graph(oracle::floyd_warshall(base), c.depth);
    CHECK(got == Length::units(oracle::bfs(adj, 0)[static_cast<std::size_t>(n)]));
    CHECK(std::llabs(got.ceil_units() - formula(n)) <= 1);
  }
  CHECK(horoball(oracle::path(8)).graph.d(0, 8) == Length::units(6));
}

TEST_CASE("cones") {
  auto pt = hyperbolic_cone(oracle::path(0), 3);
  CHECK(pt.graph.size() == 5);
  CHECK(pt.graph.d(0, *pt.apex) == Length::units(4));
  auto c = hyperbolic_cone(oracle::cycle(32), 3);
  CHECK(diameter(c.graph) <= Length::units(8));
  for (Vertex v = 0; v < 32; ++v) CHECK(c.graph.d(*c.apex, v) == Length::units(4));
  CHECK_THROWS(hyperbolic_cone(oracle::cycle(5), 0));
}

TEST_CASE("cone truncation is sound") {
  const int r = 3;
  for (const auto& base : {oracle::path(10), oracle::cycle(12), oracle::random_tree(12, 5), oracle::grid(3, 4)}) {
    const int n = static_cast<int>(base.size());
    auto c = hyperbolic_cone(base, r);
    auto deep = level_graph(oracle::floyd_warshall(base), r + 2, r);
    for (int a = 0; a < n * r; ++a) {
      auto d = oracle::bfs(deep, a);
      for (int b = 0; b < n * r; ++b) CHECK(c.graph.d(a, b) == Length::units(d[static_cast<std::size_t>(b)]));
    }
  }
}

TEST_CASE("cone hyperbolicity does not grow with the base") {
  Length first;
  for (int n : {8, 16, 32, 64}) {
    auto d = gromov_delta(hyperbolic_cone(oracle::cycle(n), 3).graph);
    CHECK(d.exhaustive);
    if (n == 8) first = d.delta;
    CHECK(d.delta <= first + Length::units(1));
  }
}

TEST_CASE("pyramid over a free ball") {
  FreeBall fb = free_ball({2, 10, "a", 5});
  PyramidSpace P = pyramid_over(fb, 2);
  Vertex one = fb.vertex_of(""), a9 = fb.vertex_of("aaaaaaaaa");
  CHECK(P.graph.d(one, a9) == Length::units(6));
  // the same graph without apices, rebuilt as a plain adjacency list
  oracle::Adjacency with(P.graph.size()), without(P.graph.size());
  for (std::size_t v = 0; v < P.graph.size(); ++v)
    for (const Arc& e : P.graph.neighbors(static_cast<Vertex>(v))) {
      with[v].push_back(e.to);
      if (P.level[v] >= 0 && P.level[static_cast<std::size_t>(e.to)] >= 0) without[v].push_back(e.to);
    }
  CHECK(oracle::bfs(with, one)[static_cast<std::size_t>(a9)] == 6);
  CHECK(oracle::bfs(without, one)[static_cast<std::size_t>(a9)] == 7);
  CHECK(P.apex_separation >= Length::units(2 * P.r));
  CHECK(P.graph.at("apex:1") == P.apex[0]);
  CHECK(fb.cosets.size() == P.cosets.size());
  // coset distances never exceed their cone distances
  auto cone = hyperbolic_cone(fb.cosets[0].graph, 2);
  for (std::size_t i = 0; i < fb.cosets[0].members.size(); ++i)
    for (std::size_t j = 0; j < fb.cosets[0].members.size(); ++j)
      CHECK(P.graph.d(fb.cosets[0].members[i], fb.cosets[0].members[j]) <= cone.graph.d(static_cast<Vertex>(i), static_cast<Vertex>(j)));
  CHECK(pyramid(fb.graph, {}, 2).graph.size() == fb.graph.size());
  std::vector<ConeBase> overlap{{{0, 1}, {}}, {{1, 2}, {}}};
  CHECK_THROWS_AS(pyramid(fb.graph, overlap, 2), StructuralError);
}

TEST_CASE("pyramid hyperbolicity across radii") {
  std::vector<Length> ds;
  DeltaOptions opt;
  opt.exhaustive_limit = 300;
  opt.sample_pool = 160;
  for (int radius : {4, 6, 8}) {
    auto P = pyramid_over(free_ball({2, radius, "a", -1}), 2);
    ds.push_back(gromov_delta(P.graph, opt).delta);
  }
  Length m = *std::max_element(ds.begin(), ds.end());
  for (Length d : ds) CHECK(d <= m);
  CHECK(ds.back() <= ds.front() + Length::units(1));
}

TEST_CASE("cone quasiconvexity") {
  Length q8 = cone_quasiconvexity(pyramid_over(free_ball({2, 8, "a", 2}), 2), 0);
  Length q10 = cone_quasiconvexity(pyramid_over(free_ball({2, 10, "a", 2}), 2), 0);
  CHECK(q8 == q10);
  // the coset alone as the base
  GraphBuilder b;
  for (int i = 0; i < 6; ++i) b.add_vertex(std::to_string(i));
  for (int i = 0; i < 5; ++i) b.add_edge(i, i + 1);
  auto line = b.build();
  auto P = pyramid(line, {{{0, 1, 2, 3, 4, 5}, {}}}, 2);
  CHECK(cone_quasiconvexity(P, 0) == Length());
  auto two = pyramid_over(free_ball({2, 6, "a", 1}), 2);
  REQUIRE(two.cosets.size() >= 2);
  CHECK(cone_quasiconvexity(two, 1) == cone_quasiconvexity(two, 2));
}

TEST_CASE("quasiconvex hulls") {
  auto t = oracle::random_tree(30, 4);
  auto g = geodesic(t, 0, 17);
  auto empty = quasiconvex_hull_check(t, g, {}, Length(), Length());
  CHECK(empty.ok);
  CHECK(empty.observed == Length());
  VertexSet sub1 = ball(t, g[1], Length::units(2)), sub2 = ball(t, g.back(), Length::units(1));
  auto two = quasiconvex_hull_check(t, g, {sub1, sub2}, Length(), Length());
  CHECK(two.ok);
  CHECK(two.members_met == 2);
  auto P = pyramid_over(free_ball({2, 6, "a", 2}), 2);
  Vertex x = P.graph.at("bA"), y = P.graph.at("Ba");
  auto path = geodesic(P.graph, x, y);
  std::vector<VertexSet> cones;
  Length Q;
  for (std::size_t c = 0; c < P.cosets.size(); ++c) {
    cones.push_back(P.cone(c));
    Q = max(Q, cone_quasiconvexity(P, c));
  }
  DeltaOptions opt;
  opt.exhaustive_limit = 300;
  Length delta = gromov_delta(P.graph, opt).delta;
  auto hc = quasiconvex_hull_check(P.graph, path, cones, Q, delta);
  CHECK(hc.members_met >= 2);
  CHECK(hc.ok);
}

TEST_CASE("entry points") {
  FreeBall fb = free_ball({2, 6, "a", 3});
  auto P = pyramid_over(fb, 2);
  CHECK(entry_points(P, fb.vertex_of("b"), 0) == VertexSet{fb.vertex_of("")});
  CHECK(entry_points(P, fb.vertex_of("aa"), 0) == VertexSet{fb.vertex_of("aa")});
  CHECK(entry_points(P, P.apex[0], 0) == P.cosets[0]);
  auto far = entry_points(P, fb.vertex_of("abbb"), 0);
  CHECK(hausdorff(P.graph, far, {fb.vertex_of("a")}) <= Length::units(1));
  for (std::size_t c = 0; c < P.cosets.size(); c += 3) {
    auto all = all_entry_points(P, c);
    for (std::size_t v = 0; v < P.graph.size(); v += 7) CHECK(all[v] == entry_points(P, static_cast<Vertex>(v), c));
  }
}

TEST_CASE("push-off") {
  FreeBall fb = free_ball({2, 10, "a", 5});
  auto P = pyramid_over(fb, 2);
  Vertex b = fb.vertex_of("b"), t = fb.vertex_of("aaaaaaaaab");
  auto g = geodesic(P.graph, b, t);
  CHECK(g.size() == 9);
  CHECK(std::find(g.begin(), g.end(), P.apex[0]) != g.end());
  auto po = push_off(P, g);
  CHECK(po.path.size() == 12);
  CHECK(po.path.front() == b);
  CHECK(po.path.back() == t);
  CHECK(po.replaced == 1);
  CHECK(po.hausdorff == Length());
  CHECK(po.fit.lambda == Length::units(1));
  CHECK(po.fit.epsilon == Length());
  auto flat = geodesic(P.graph, fb.vertex_of("b"), fb.vertex_of("bb"));
  auto same = push_off(P, flat);
  CHECK(same.path == flat);
  CHECK(same.replaced == 0);
  CHECK_THROWS(push_off(P, {P.apex[0]}));
}

TEST_CASE("auxiliary structure") {
  FreeBall fb = free_ball({2, 5, "a", 2});
  auto base = tree_instance(fb.graph);
  std::vector<ConeBase> cs;
  for (const auto& c : fb.cosets) cs.push_back({c.members, c.graph});
  auto aux = aux_structure(base, cs, 2);
  CHECK(aux.domain_count() == fb.cosets.size() + 1);
  CHECK_FALSE(validate_structure(aux));
  auto reports = run_axiom_suite(aux);
  for (const auto& r : reports) CHECK_MESSAGE(r.pass, r.check);
  for (const auto& [k, s] : aux.rho_set)
    if (k.second != 0) CHECK(set_diameter(aux.space(k.second), s) <= aux.constants.proj_diam);
  auto none = aux_structure(base, {}, 2);
  CHECK(none.domain_count() == 1);
  CHECK(none.space(0).size() == fb.graph.size());
}
