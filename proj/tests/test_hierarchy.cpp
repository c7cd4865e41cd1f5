#include <doctest.h>

#include <set>

#include "hhs/axioms.hpp"
#include "hhs/errors.hpp"
#include "hhs/instances.hpp"
#include "oracles.hpp"

using namespace hhs;

namespace {

// Subsets of {1..k} nested by inclusion, orthogonal when disjoint.
DomainIndex subset_index(int k, std::vector<std::set<int>>& sets) {
  std::vector<std::string> names;
  for (int m = 1; m < (1 << k); ++m) {
    std::set<int> s;
    for (int i = 0; i < k; ++i)
      if (m >> i & 1) s.insert(i + 1);
    sets.push_back(s);
    names.push_back("S" + std::to_string(m));
  }
  DomainIndex d(names);
  for (std::size_t a = 0; a < sets.size(); ++a)
    for (std::size_t b = 0; b < sets.size(); ++b) {
      bool sub = std::includes(sets[b].begin(), sets[b].end(), sets[a].begin(), sets[a].end());
      bool disj = std::none_of(sets[a].begin(), sets[a].end(), [&](int i) { return sets[b].count(i) > 0; });
      if (sub) d.set_nested(static_cast<Domain>(a), static_cast<Domain>(b));
      if (disj) d.set_orthogonal(static_cast<Domain>(a), static_cast<Domain>(b));
    }
  return d;
}

}  // namespace

TEST_CASE("domain index on subsets") {
  std::vector<std::set<int>> sets;
  auto d = subset_index(4, sets);
  CHECK(d.size() == 15);
  CHECK(d.longest_chain() == 4);
  CHECK(d.top().has_value());
  CHECK(d.minimal_elements().size() == 4);
  auto lv = d.levels();
  for (std::size_t u = 0; u < sets.size(); ++u) {
    CHECK(lv[u] == static_cast<int>(sets[u].size()));
    for (std::size_t v = 0; v < sets.size(); ++v) {
      if (u == v) continue;
      bool sub = std::includes(sets[v].begin(), sets[v].end(), sets[u].begin(), sets[u].end());
      bool sup = std::includes(sets[u].begin(), sets[u].end(), sets[v].begin(), sets[v].end());
      std::vector<int> c;
      std::set_intersection(sets[u].begin(), sets[u].end(), sets[v].begin(), sets[v].end(), std::back_inserter(c));
      bool tr = !sub && !sup && !c.empty();
      CHECK(d.transverse(static_cast<Domain>(u), static_cast<Domain>(v)) == tr);
    }
  }
  CHECK(check_relations(d, 4).pass);
  CHECK_FALSE(check_relations(d, 3).pass);
}

TEST_CASE("relation checker catches broken indices") {
  std::vector<std::set<int>> sets;
  auto d = subset_index(2, sets);
  auto bad = d;
  bad.set_orthogonal(0, 0);
  CHECK_FALSE(check_relations(bad, 2).pass);
  bad = d;
  bad.set_orthogonal(0, 1, false);
  CHECK_FALSE(check_relations(bad, 2).pass);
  bad = d;
  bad.set_orthogonal_sym(0, 2);
  CHECK_FALSE(check_relations(bad, 2).pass);
  bad = d;
  bad.set_nested(2, 0);
  CHECK_FALSE(check_relations(bad, 2).pass);
  DomainIndex cyc({"A", "B", "C"});
  cyc.set_nested(0, 1);
  cyc.set_nested(1, 2);
  cyc.set_nested(2, 0);
  CHECK_THROWS_AS(cyc.levels(), StructuralError);
}

TEST_CASE("theta tables read at the next recorded key") {
  ThetaTable t{{0, Length::units(0)}, {2, Length::units(5)}, {8, Length::units(9)}};
  CHECK(*theta_at(t, 1) == Length::units(5));
  CHECK(*theta_at(t, 2) == Length::units(5));
  CHECK(*theta_at(t, 3) == Length::units(9));
  CHECK_FALSE(theta_at(t, 9).has_value());
}

TEST_CASE("grid coordinates match absolute differences") {
  auto h = grid_instance({{6, 5}});
  auto one = h.index.at("{1}"), two = h.index.at("{2}"), both = h.index.at("{1,2}");
  CHECK(h.index.orthogonal(one, two));
  CHECK(h.index.proper_nested(one, both));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 6; ++c)
        for (int e = 0; e < 5; ++e) {
          Vertex x = h.ambient.at(oracle::cell(a, b)), y = h.ambient.at(oracle::cell(c, e));
          CHECK(h.du(one, x, y) == Length::units(std::abs(a - c)));
          CHECK(h.du(two, x, y) == Length::units(std::abs(b - e)));
          CHECK(h.du(both, x, y) == Length());
        }
}

TEST_CASE("structure json round trip") {
  for (const auto& h : {grid_instance({{3, 4}}), relative_instance(default_relative_spec())}) {
    auto j = structure_to_json(h);
    auto back = structure_from_json(j);
    CHECK(structure_to_json(back) == j);
    CHECK(all_pass(run_axiom_suite(back)));
  }
  CHECK_THROWS_AS(structure_from_json(nlohmann::json{{"format", "nope"}}), ParseError);
}

TEST_CASE("validate_structure reports missing entries") {
  auto h = grid_instance({{3, 3}});
  CHECK_FALSE(validate_structure(h).has_value());
  h.rho_set.erase({h.index.at("{1}"), h.index.at("{1,2}")});
  CHECK(validate_structure(h).has_value());
  CHECK_THROWS_AS(h.rho(h.index.at("{1}"), h.index.at("{1,2}")), StructuralError);
}

TEST_CASE("passing up on a grid") {
  auto h = grid_instance({{10, 10}});
  // both axes can move by at least E while the point space never does
  CHECK(check_passing_up(h, Length::units(5)).N == 3);
  CHECK(check_passing_up(h, Length::units(0)).N == 1);
}

TEST_CASE("relevant order on a grid") {
  auto h = grid_instance({{10, 10}});
  Vertex x = h.ambient.at("0,0"), y = h.ambient.at("5,5");
  auto o = relevant_order(h, x, y, Length::units(3));
  CHECK(o.domains.size() == 2);
  CHECK(o.partial_order);
  CHECK(o.below_threshold);
  CHECK_FALSE(o.le[0][1]);
  CHECK_FALSE(o.le[1][0]);
  auto none = relevant_order(h, x, h.ambient.at("1,1"), Length::units(3));
  CHECK(none.domains.empty());
}

TEST_CASE("suite selectors") {
  auto h = tree_instance(oracle::random_tree(30, 3));
  for (const char* a : {"all", "relations", "proj", "consistency", "bgi", "links", "realization", "uniqueness"})
    CHECK(all_pass(run_axiom_suite(h, a)));
  CHECK_THROWS_AS(run_axiom_suite(h, "nonsense"), std::invalid_argument);
}

TEST_CASE("uniqueness on a grid against brute force") {
  auto h = grid_instance({{7, 7}});
  auto d = oracle::floyd_warshall(h.ambient);
  auto prof = uniqueness_profile(h);
  for (auto [k, v] : prof) {
    std::int64_t worst = 0;
    for (int a = 0; a < 49; ++a)
      for (int b = 0; b < 49; ++b) {
        int dx = std::abs(a / 7 - b / 7), dy = std::abs(a % 7 - b % 7);
        if (dx < k && dy < k) worst = std::max(worst, d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]);
      }
    CHECK(v.ticks() == worst);
  }
}

TEST_CASE("scrambled projection is caught") {
  auto h = tree_instance(oracle::path(8));
  std::swap(h.proj[0][0], h.proj[0][8]);
  auto r = check_projections(h);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.witness.is_null());
}
