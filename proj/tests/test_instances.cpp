#include <doctest.h>

#include <cstdlib>
#include <set>

#include "hhs/errors.hpp"
#include "hhs/free_group.hpp"
#include "hhs/instances.hpp"
#include "hhs/metric.hpp"
#include "oracles.hpp"

using namespace hhs;

TEST_CASE("grid instance shape") {
  auto h = grid_instance({{4, 3, 2}});
  CHECK(h.ambient.size() == 24);
  CHECK(h.ambient.edge_count() == 3 * 3 * 2 + 4 * 2 * 2 + 4 * 3 * 1);
  CHECK(h.domain_count() == 7);
  CHECK(h.index.name(0) == "{1}");
  CHECK(h.index.name(6) == "{1,2,3}");
  CHECK(h.constants.complexity == 3);
  CHECK(h.parallel_copies[static_cast<std::size_t>(h.index.at("{1}"))].size() == 6);
  CHECK(h.parallel_copies[static_cast<std::size_t>(h.index.at("{2,3}"))].size() == 4);
  CHECK(all_pass(run_axiom_suite(h)));
  CHECK_THROWS_AS(grid_instance({{}}), std::invalid_argument);
}

TEST_CASE("grid ambient metric is l1") {
  auto h = grid_instance({{5, 6}});
  auto d = oracle::floyd_warshall(h.ambient);
  for (int a = 0; a < 30; ++a)
    for (int b = 0; b < 30; ++b)
      CHECK(d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] ==
            Length::units(std::abs(a / 6 - b / 6) + std::abs(a % 6 - b % 6)).ticks());
}

TEST_CASE("tree instance") {
  auto t = oracle::random_tree(100, 11);
  auto h = tree_instance(t);
  CHECK(h.domain_count() == 1);
  CHECK(all_pass(run_axiom_suite(h)));
  CHECK_THROWS_AS(tree_instance(oracle::cycle(5)), StructuralError);
}

TEST_CASE("product of trees") {
  auto a = tree_instance(oracle::random_tree(20, 1));
  auto b = tree_instance(oracle::random_tree(20, 2));
  auto p = product_instance(a, b);
  CHECK(p.ambient.size() == 400);
  CHECK(p.domain_count() == 3);
  Domain L = p.index.at("L.S"), R = p.index.at("R.S");
  CHECK(p.index.orthogonal(L, R));
  CHECK(p.index.proper_nested(L, p.top()));
  // product metric is the sum of factor metrics
  auto da = oracle::floyd_warshall(a.ambient), db = oracle::floyd_warshall(b.ambient);
  for (int x = 0; x < 400; x += 7)
    for (int y = 0; y < 400; y += 3)
      CHECK(p.ambient.dt(x, y) == da[static_cast<std::size_t>(x / 20)][static_cast<std::size_t>(y / 20)] +
                                      db[static_cast<std::size_t>(x % 20)][static_cast<std::size_t>(y % 20)]);
  CHECK(all_pass(run_axiom_suite(p)));
}

TEST_CASE("relative instance") {
  auto spec = default_relative_spec();
  CHECK(spec.tree.size() == 31);
  auto h = relative_instance(spec);
  CHECK(h.ambient.size() == 31 + 2 * 24);
  CHECK(h.space(0).size() == h.ambient.size() + 2);
  CHECK_FALSE(h.hyperbolic[1]);
  CHECK(h.index.minimal_elements().size() == 2);
  // flats collapse in the top space
  Vertex c1 = h.ambient.at("F1:4,4"), c2 = h.ambient.at("F1:0,4");
  CHECK(h.ambient.d(c1, c2) == Length::units(4));
  CHECK(h.du(0, c1, c2) == Length::units(1));
  CHECK(h.du(1, c1, c2) == Length::units(4));
  CHECK(h.du(2, c1, c2) == Length());
  CHECK(all_pass(run_axiom_suite(h)));
  CHECK(h.constants.E >= h.constants.kappa0);
  auto j = relative_spec_to_json(spec);
  CHECK(relative_spec_to_json(relative_spec_from_json(j)) == j);
  spec.attachments = {"t15", "t15"};
  CHECK_THROWS_AS(relative_instance(spec), StructuralError);
}

TEST_CASE("calibrated constants are tight on the relative instance") {
  auto h = relative_instance(default_relative_spec());
  auto c = h.constants;
  if (c.E > Length::units(1)) {
    h.constants.E = c.E - Length::units(1);
    bool ok = check_bgi(h).pass && check_orth_close(h).pass && check_consistency(h).pass;
    CHECK_FALSE(ok);
  }
  h.constants = c;
  for (auto& [k, v] : h.constants.theta_u)
    if (v > Length()) {
      v -= Length::units(1);
      break;
    }
  CHECK_FALSE(empirical_uniqueness(h).pass);
}

TEST_CASE("free group words") {
  CHECK(fg::reduce("aAbBa") == "a");
  CHECK(fg::multiply("ab", "BA") == "");
  CHECK(fg::id_of(fg::multiply("ab", "BA")) == "1");
  CHECK(fg::inverse("abC") == "cBA");
  CHECK(fg::power("ab", -2) == "BABA");
  CHECK(fg::conjugate("b", "a") == "baB");
  CHECK(fg::alphabet(2) == "aAbB");
}

TEST_CASE("free ball enumeration") {
  for (int r = 1; r <= 6; ++r) {
    auto fb = free_ball({2, r, "a", -1});
    std::size_t expect = 1;
    std::size_t layer = 4;
    for (int i = 1; i <= r; ++i, layer *= 3) expect += layer;
    CHECK(fb.graph.size() == expect);
    CHECK(fb.graph.edge_count() + 1 == fb.graph.size());
    for (std::size_t v = 0; v < fb.words.size(); ++v) CHECK(fg::reduce(fb.words[v]) == fb.words[v]);
  }
  auto fb = free_ball({2, 5, "a", -1});
  CHECK(fb.cosets[0].rep.empty());
  CHECK(fb.cosets[0].members.size() == 11);
  CHECK(diameter(fb.cosets[0].graph) == Length::units(10));
  CHECK(fb.graph.d(fb.vertex_of("aaaaa"), fb.vertex_of("AAAAA")) == Length::units(10));
  CHECK(fb.graph.d(fb.vertex_of("1"), fb.vertex_of("abAB")) == Length::units(4));
  CHECK_THROWS(fb.vertex_of("aaaaaa"));
  // cosets partition their members
  std::set<Vertex> seen;
  for (const auto& c : fb.cosets)
    for (Vertex v : c.members) CHECK(seen.insert(v).second);
  CHECK(free_ball({2, 2, "a", -1}).cosets.size() == 3);
}

TEST_CASE("tree helpers") {
  CHECK(path_graph(5).size() == 6);
  auto bt = binary_tree(6, 10);
  CHECK(bt.size() == 1 + 126 * 10);
  CHECK(bt.edge_count() + 1 == bt.size());
  CHECK(bt.d(bt.at("t0"), bt.at("t126")) == Length::units(60));
  auto rt = random_tree(50, 3);
  CHECK(rt.connected());
  CHECK(rt.edge_count() == 49);
}

TEST_CASE("vertex budget") {
  ::setenv("HHS_BUDGET", "50", 1);
  CHECK(vertex_budget() == 50);
  CHECK_THROWS_AS(grid_instance({{10, 10}}), BudgetError);
  CHECK_THROWS_AS(free_ball({2, 4, "a", -1}), BudgetError);
  ::unsetenv("HHS_BUDGET");
  CHECK_NOTHROW(grid_instance({{10, 10}}));
}
