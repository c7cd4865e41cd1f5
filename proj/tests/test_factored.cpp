#include <doctest.h>

#include "hhs/errors.hpp"
#include "hhs/factored.hpp"
#include "hhs/instances.hpp"
#include "oracles.hpp"

using namespace hhs;

namespace {

// d̂ as an infimum over sequences: d' = min{1,d} inside a common parallel copy, d otherwise.
oracle::Table sequence_infimum(const HierarchicalStructure& h, const std::vector<Domain>& U) {
  auto d = oracle::floyd_warshall(h.ambient);
  const std::size_t n = d.size();
  std::vector<std::vector<char>> common(n, std::vector<char>(n, 0));
  for (Domain u : U)
    for (const auto& c : h.parallel_copies[static_cast<std::size_t>(u)])
      for (Vertex a : c)
        for (Vertex b : c) common[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
  const std::int64_t one = Length::units(1).ticks();
  oracle::Table dp = d;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (common[i][j]) dp[i][j] = std::min(dp[i][j], one);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dp[i][j] = std::min(dp[i][j], dp[i][k] + dp[k][j]);
  return dp;
}

}  // namespace

TEST_CASE("factoring one grid axis") {
  auto h = grid_instance({{10, 10}});
  Domain a1 = h.index.at("{1}"), a2 = h.index.at("{2}");
  auto f = factor(h, {a1});
  Vertex o = h.ambient.at("0,0"), far = h.ambient.at("9,9");
  CHECK(f.graph.d(o, far) == Length::units(10));
  auto oracle_d = sequence_infimum(h, {a1});
  for (int x = 0; x < 100; ++x)
    for (int y = 0; y < 100; ++y) CHECK(f.graph.dt(x, y) == oracle_d[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]);
  auto both = factor(h, {a1, a2});
  CHECK(diameter(both.graph) <= Length::units(2));
  auto oracle_b = sequence_infimum(h, {a1, a2});
  for (int x = 0; x < 100; ++x)
    for (int y = 0; y < 100; ++y) {
      CHECK(both.graph.dt(x, y) == oracle_b[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]);
      CHECK(both.graph.dt(x, y) <= f.graph.dt(x, y));
      CHECK(f.graph.dt(x, y) <= h.ambient.dt(x, y));
    }
  CHECK(f.induced.domain_count() == 2);
  CHECK(f.induced.index.name(0) == "{2}");
}

TEST_CASE("factoring nothing and factoring twice") {
  auto h = grid_instance({{5, 4}});
  auto f = factor(h, {});
  CHECK(f.cone_edges == 0);
  for (int x = 0; x < 20; ++x)
    for (int y = 0; y < 20; ++y) CHECK(f.graph.dt(x, y) == h.ambient.dt(x, y));
  auto once = factor(h, {0});
  auto h2 = h;
  h2.ambient = once.graph;
  auto twice = factor(h2, {0});
  CHECK(twice.cone_edges == 0);
  for (int x = 0; x < 20; ++x)
    for (int y = 0; y < 20; ++y) CHECK(twice.graph.dt(x, y) == once.graph.dt(x, y));
}

TEST_CASE("factor rejects bad inputs") {
  auto h = grid_instance({{4, 4}});
  CHECK_THROWS_AS(factor(h, {h.index.at("{1,2}")}), StructuralError);
  CHECK_FALSE(is_nesting_closed(h.index, {h.index.at("{1,2}")}));
  auto w = tree_instance(oracle::random_tree(10, 1));
  w.parallel_copies[0].clear();
  CHECK_THROWS_AS(factor(w, {0}), StructuralError);
  GraphBuilder b;
  b.add_vertex("a");
  b.add_vertex("b");
  b.add_edge(0, 1, Length::units(2));
  CHECK_THROWS_AS(factor(tree_instance(b.build()), {0}), StructuralError);
}

TEST_CASE("factored structures remain hierarchical") {
  auto h = grid_instance({{10, 10}});
  auto c = check_factored_hhs(h, {h.index.at("{1}")});
  CHECK(c.pass);
  CHECK(c.constants.lipschitz == Length::units(1));
  auto same = check_factored_hhs(h, {});
  auto orig = run_axiom_suite(h);
  REQUIRE(same.reports.size() == orig.size());
  for (std::size_t i = 0; i < orig.size(); ++i) CHECK(to_json(same.reports[i]) == to_json(orig[i]));
  auto r = relative_instance(default_relative_spec());
  CHECK(check_factored_hhs(r, r.index.minimal_elements()).pass);
}

TEST_CASE("factored uniqueness profile") {
  auto h = grid_instance({{10, 10}});
  CheckOptions opt;
  opt.kappa_ladder = {1, 2, 3, 4, 6, 8, 10};
  auto one = factored_uniqueness_profile(h, {h.index.at("{1}")}, opt);
  CHECK(one.at(3) <= Length::units(4));
  // oracle: pairs with |Δy| < κ have d̂ = |Δy| + [Δx ≠ 0]
  for (auto [k, v] : one) {
    std::int64_t worst = 0;
    for (int dy = 0; dy < std::min<std::int64_t>(k, 10); ++dy) worst = std::max<std::int64_t>(worst, dy + 1);
    CHECK(v == Length::units(worst));
  }
  auto hat = factored_uniqueness_profile(h, h.index.minimal_elements(), opt);
  for (auto [k, v] : hat) CHECK(v <= Length::units(2));

  auto t = tree_instance(path_graph(12));
  auto triv = factored_uniqueness_profile(t, {}, opt);
  for (auto [k, v] : triv) CHECK(v == Length::units(std::min<std::int64_t>(k - 1, 12)));
}

TEST_CASE("maximal coning") {
  auto h = grid_instance({{10, 10}});
  auto q = maximal_coning_qi(h);
  CHECK(q.lambda == Length::units(1));
  CHECK(q.epsilon <= Length::units(2));
  auto t = tree_instance(oracle::random_tree(40, 9));
  auto qt = maximal_coning_qi(t);
  CHECK(qt.lambda == Length::units(1));
  CHECK(qt.epsilon == Length());
  auto small = relative_instance(default_relative_spec());
  auto spec = default_relative_spec();
  spec.tree = binary_tree(5);
  spec.attachments = {"t31", "t62"};
  auto big = relative_instance(spec);
  auto qs = maximal_coning_qi(small), qb = maximal_coning_qi(big);
  CHECK(qs.lambda == qb.lambda);
  CHECK(qs.epsilon == qb.epsilon);
}

TEST_CASE("friendship") {
  auto g = grid_instance({{6, 6}});
  CHECK(is_friendly(g.index, g.index.at("{1}"), g.index.at("{2}")));
  CHECK(is_friendly(g.index, g.index.at("{1}"), g.index.at("{1,2}")));
  auto r = relative_instance(default_relative_spec());
  CHECK_FALSE(is_friendly(r.index, 1, 2));
  CHECK(is_friendly(r.index, 1, 0));
  auto rg = verify_friendship_lemmas(g);
  CHECK(rg.pass);
  CHECK(rg.details["listed"].empty());
  auto rr = verify_friendship_lemmas(r);
  CHECK(rr.pass);
  CHECK_FALSE(rr.details["listed"].empty());
  FriendshipOptions zero;
  zero.gap = Length();
  auto rz = verify_friendship_lemmas(r, zero);
  for (const auto& e : rz.details["listed"]) CHECK(e["gap"].get<Length>() > Length());
  CHECK(rz.details["listed"].size() >= rr.details["listed"].size());
}
