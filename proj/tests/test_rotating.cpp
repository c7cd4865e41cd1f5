#include <doctest.h>

#include "hhs/free_group.hpp"
#include "hhs/rotating.hpp"
#include "oracles.hpp"

using namespace hhs;

namespace {

const RotatingContext& ctx9() {
  static RotatingContext c = rotating_context(free_ball({2, 10, "a", 5}), 2, {"aaaaaaaaa"});
  return c;
}

}  // namespace

TEST_CASE("fulcrum across the identity coset") {
  const auto& c = ctx9();
  Vertex b = c.ball.vertex_of("b"), t = c.ball.vertex_of("aaaaaaaaab");
  CHECK(detect_fulcrum(c, b, b, Length()).empty());
  auto ws = detect_fulcrum(c, b, t, Length());
  REQUIRE_FALSE(ws.empty());
  bool found = false;
  for (const auto& w : ws) {
    CHECK(validate_fulcrum(c, b, t, w, Length()));
    CHECK(w.apex == c.P.apex[0]);
    if (c.P.graph.id(w.xp) == "1@2" && c.P.graph.id(w.yp) == "aaaaaaaaa@2") {
      found = true;
      CHECK(w.h == "AAAAAAAAA");
      CHECK(w.defect == Length());
    }
  }
  CHECK(found);
  auto far = rotating_context(free_ball({2, 10, "a", 5}), 2, {"aaaaaaaaaaaaaaaaaaaa"});
  CHECK(detect_fulcrum(far, b, t, Length::units(2)).empty());
  CHECK_FALSE(is_linked(c, b, t));
  CHECK(is_linked(c, c.ball.vertex_of(""), b));
  // a tampered witness no longer validates
  auto bad = ws.front();
  bad.h = "aaaaaaa";
  CHECK_FALSE(validate_fulcrum(c, b, t, bad, Length()));
}

TEST_CASE("linked pairs are symmetric and translation invariant") {
  const auto& c = ctx9();
  const char* pts[] = {"", "b", "ab", "aaaaaaaaab", "Ba", "aaaab", "AAAAb"};
  for (const char* p : pts)
    for (const char* q : pts) {
      Vertex x = c.ball.vertex_of(p), y = c.ball.vertex_of(q);
      CHECK(is_linked(c, x, y) == is_linked(c, y, x));
      CHECK(is_weakly_linked(c, x, y) == is_weakly_linked(c, y, x));
    }
  // left translation by a and by b keeps everything inside the ball here
  for (const char* g : {"a", "A"}) {
    Vertex x = c.ball.vertex_of("b"), y = c.ball.vertex_of("aaaaaaaab");
    auto gx = act(c, g, x), gy = act(c, g, y);
    REQUIRE(gx);
    REQUIRE(gy);
    CHECK(is_linked(c, x, y) == is_linked(c, *gx, *gy));
  }
}

TEST_CASE("greendlinger dichotomy") {
  const auto& c = ctx9();
  auto B = greendlinger_check(c, "aaaaaaaaa", c.ball.vertex_of(""));
  CHECK(B.branch == 'B');
  CHECK(*B.coset == 0);
  CHECK(B.apex_distance == Length::units(3));
  auto A = greendlinger_check(c, "aaaaaaaaa", c.ball.vertex_of("b"));
  CHECK(A.branch == 'A');
  REQUIRE_FALSE(A.fulcra.empty());
  CHECK(A.fulcra.front().apex == c.P.apex[0]);
  auto conj = greendlinger_check(c, "baaaaaaaaaB", c.ball.vertex_of("b"));
  CHECK(conj.branch == 'B');
  CHECK(c.P.names[*conj.coset] == "b");
  CHECK_THROWS_AS(greendlinger_check(c, "baaaaaaaaaB", c.ball.vertex_of("")), std::out_of_range);
  // no third outcome on these points
  for (const char* n : {"aaaaaaaaa", "AAAAAAAAA"})
    for (const char* p : {"", "b", "B", "A", "a", "bb", "Ba", "aB"}) {
      Vertex x = c.ball.vertex_of(p);
      if (!act(c, n, x)) continue;
      auto g = greendlinger_check(c, n, x);
      CHECK(g.branch != '-');
      if (g.branch == 'A')
        for (const auto& w : g.fulcra) CHECK(validate_fulcrum(c, x, *act(c, n, x), w, c.opt.d_weak));
    }
}

TEST_CASE("geometric separation") {
  FreeBall fb = free_ball({2, 5, "a", 1});
  std::vector<VertexSet> two{normalized(fb.cosets[0].members), normalized(fb.cosets[1].members)};
  CHECK(geometric_separation(fb.graph, two, Length()).M == Length());
  auto one = geometric_separation(fb.graph, two, Length::units(1));
  CHECK(one.M == Length());
  REQUIRE(one.witness);
  // oracle: the near part of each coset, measured directly
  auto d = oracle::floyd_warshall(fb.graph);
  std::vector<VertexSet> all;
  for (const auto& co : fb.cosets) all.push_back(normalized(co.members));
  auto s2 = geometric_separation(fb.graph, all, Length::units(2));
  std::int64_t want = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (i == j) continue;
      VertexSet near;
      for (Vertex x : all[i]) {
        std::int64_t m = oracle::kInf;
        for (Vertex y : all[j]) m = std::min(m, d[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]);
        if (m <= Length::units(2).ticks()) near.push_back(x);
      }
      for (Vertex x : near)
        for (Vertex y : near) want = std::max(want, d[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]);
    }
  CHECK(s2.M.ticks() == want);
}

TEST_CASE("folding") {
  auto none = rotating_context(free_ball({2, 6, "a", 3}), 2, {});
  auto f = fold_pyramid(none, 4);
  for (std::size_t v = 0; v < f.cls.size(); ++v) CHECK(f.cls[v] == static_cast<Vertex>(v));
  DeltaOptions dopt;
  dopt.exhaustive_limit = 300;
  auto q0 = quotient_pyramid(none, 2, dopt);
  CHECK(q0.graph.size() == none.P.graph.size());
  CHECK(q0.stable);

  auto c = rotating_context(free_ball({2, 8, "a", 4}), 2, {"aaaaaa"});
  auto q = quotient_pyramid(c, 4, dopt);
  CHECK(q.graph.size() < c.P.graph.size());
  CHECK(q.stable_radius >= 6);
  Vertex one = c.ball.vertex_of(""), a6 = c.ball.vertex_of("aaaaaa");
  CHECK(q.vertex_of[static_cast<std::size_t>(one)] == q.vertex_of[static_cast<std::size_t>(a6)]);
  CHECK(q.cone_diameter < c.P.graph.d(c.P.apex[0], one) + c.P.graph.d(c.P.apex[0], one));
  // folding never stretches distances
  for (const char* x : {"", "b", "ab", "aaab", "BBa"})
    for (const char* y : {"aaaaa", "bAb", "Abbb", "aaaaaaab"}) {
      Vertex u = c.ball.vertex_of(x), v = c.ball.vertex_of(y);
      CHECK(q.graph.d(q.vertex_of[static_cast<std::size_t>(u)], q.vertex_of[static_cast<std::size_t>(v)]) <= c.P.graph.d(u, v));
    }
}

TEST_CASE("quotient index set") {
  auto none = rotating_context(free_ball({2, 6, "a", 3}), 2, {});
  auto qs = quotient_index_set(none, 4);
  CHECK(qs.orbits.size() == none.P.cosets.size());
  for (const auto& o : qs.orbits) CHECK(o.size() == 1);
  auto c = rotating_context(free_ball({2, 7, "a", 7}), 2, {"aaaa"});
  auto qi = quotient_index_set(c, 2);
  auto coset_named = [&](const std::string& n) {
    return static_cast<std::size_t>(std::find(c.P.names.begin(), c.P.names.end(), n) - c.P.names.begin());
  };
  std::size_t u = coset_named("AAb"), v = coset_named("aab");
  REQUIRE(u < c.P.names.size());
  REQUIRE(v < c.P.names.size());
  bool together = false;
  for (const auto& o : qi.orbits)
    together = together || (std::find(o.begin(), o.end(), u) != o.end() && std::find(o.begin(), o.end(), v) != o.end());
  CHECK(together);
  for (const auto& p : qi.pairs) CHECK(p.linked);
}
