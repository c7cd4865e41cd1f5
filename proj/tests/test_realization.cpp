#include <doctest.h>

#include <functional>

#include "hhs/errors.hpp"
#include "hhs/hull.hpp"
#include "hhs/instances.hpp"
#include "hhs/realization.hpp"
#include "oracles.hpp"

using namespace hhs;

namespace {

// Every breakpoint choice tried: segments of diameter ≤ D and the pairwise lower bound on the subsequence.
bool brute_unparameterized(const oracle::Table& d, const std::vector<int>& seq, std::int64_t D) {
  const std::size_t m = seq.size();
  auto diam = [&](std::size_t i, std::size_t j) {
    std::int64_t w = 0;
    for (std::size_t a = i; a <= j; ++a)
      for (std::size_t b = i; b <= j; ++b) w = std::max(w, d[static_cast<std::size_t>(seq[a])][static_cast<std::size_t>(seq[b])]);
    return w;
  };
  const std::int64_t unit = Length::units(1).ticks();
  std::vector<std::size_t> br{0};
  std::function<bool()> rec = [&]() -> bool {
    std::size_t last = br.back();
    if (last == m - 1) {
      for (std::size_t a = 0; a < br.size(); ++a)
        for (std::size_t b = a + 1; b < br.size(); ++b) {
          std::int64_t dd = d[static_cast<std::size_t>(seq[br[a]])][static_cast<std::size_t>(seq[br[b]])];
          if (dd * D + D * D * unit < static_cast<std::int64_t>(b - a) * unit) return false;
        }
      return true;
    }
    for (std::size_t j = last + 1; j < m; ++j) {
      if (diam(last, j) > D * unit) break;
      br.push_back(j);
      if (rec()) return true;
      br.pop_back();
    }
    return false;
  };
  if (m == 1) return true;
  return rec();
}

}  // namespace

TEST_CASE("point tuples realize exactly on a grid") {
  auto h = grid_instance({{6, 6}});
  std::size_t consistent = 0;
  std::size_t n = for_each_point_tuple(h, [&](const Tuple& t) {
    if (!is_consistent(h, t, Length()).consistent) return;
    ++consistent;
    auto r = realize(h, t, Length());
    CHECK(r.error == Length());
    CHECK(r.within_contract);
    std::string expect = h.space(0).id(t.b[0][0]) + "," + h.space(1).id(t.b[1][0]);
    CHECK(h.ambient.id(r.point) == expect);
  });
  CHECK(n == 36);
  CHECK(consistent == 36);
}

TEST_CASE("ambient points give consistent tuples") {
  auto r = relative_instance(default_relative_spec());
  for (std::size_t x = 0; x < r.ambient.size(); ++x) {
    auto t = point_tuple(r, static_cast<Vertex>(x));
    CHECK(is_consistent(r, t, r.constants.kappa0).consistent);
    auto z = realize(r, t, r.constants.kappa0);
    CHECK(z.error <= r.constants.proj_diam);
  }
}

TEST_CASE("inconsistent tuple on transverse flats") {
  auto r = relative_instance(default_relative_spec());
  auto t = point_tuple(r, r.ambient.at("t0"));
  t.b[1] = {r.space(1).at("4,4")};
  t.b[2] = {r.space(2).at("4,4")};
  auto c = is_consistent(r, t, Length::units(2));
  CHECK_FALSE(c.consistent);
  CHECK(c.worst == Length::units(8));
  CHECK(c.witness["transverse"].size() == 2);
  // concentrated on one flat: realized inside it
  auto f = point_tuple(r, r.ambient.at("F1:2,3"));
  auto z = realize(r, f, Length());
  CHECK(r.ambient.id(z.point) == "F1:2,3");
  CHECK(z.error == Length());
  auto j = tuple_to_json(r, f);
  auto back = tuple_from_json(r, j);
  CHECK(back.b == f.b);
  j.erase("S");
  CHECK_THROWS_AS(tuple_from_json(r, j), ParseError);
}

TEST_CASE("gates on a grid") {
  auto h = grid_instance({{10, 10}});
  auto d = oracle::floyd_warshall(h.ambient);
  VertexSet column;
  for (int j = 0; j < 10; ++j) column.push_back(h.ambient.at("3," + std::to_string(j)));
  CHECK(h.ambient.id(gate(h, column, h.ambient.at("7,2")).point) == "3,2");
  VertexSet box;
  for (int i = 2; i < 6; ++i)
    for (int j = 4; j < 9; ++j) box.push_back(h.ambient.at(oracle::cell(i, j)));
  box = normalized(box);
  for (const VertexSet* Y : {&column, &box})
    for (int x = 0; x < 100; ++x) {
      std::int64_t best = oracle::kInf;
      for (Vertex y : *Y) best = std::min(best, d[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]);
      auto g = gate(h, *Y, x);
      CHECK(contains(*Y, g.point));
      CHECK(d[static_cast<std::size_t>(x)][static_cast<std::size_t>(g.point)] == best);
      if (contains(*Y, x)) CHECK(g.point == x);
    }
  CHECK(hqc_constant(h, box).k0 == Length());
}

TEST_CASE("gate idempotence on the relative instance") {
  auto r = relative_instance(default_relative_spec());
  auto pr = product_region(r, 1);
  for (Vertex y : pr.P) CHECK(gate(r, pr.P, y).point == y);
  Vertex x = r.ambient.at("t0");
  auto g = gate(r, pr.P, x);
  CHECK(contains(pr.P, g.point));
  CHECK(r.du(1, g.point, r.ambient.at("t15")) == Length());
}

TEST_CASE("product regions") {
  auto h = grid_instance({{10, 10}});
  auto p = product_region(h, h.index.at("{1}"));
  CHECK(p.P.size() == 100);
  CHECK(p.F_copies.size() == 10);
  for (const auto& c : p.F_copies) {
    CHECK(c.size() == 10);
    std::string second = h.ambient.id(c[0]).substr(h.ambient.id(c[0]).find(','));
    for (Vertex v : c) CHECK(h.ambient.id(v).substr(h.ambient.id(v).find(',')) == second);
  }
  CHECK(*p.provider_gap == Length());
  auto r = relative_instance(default_relative_spec());
  auto f = product_region(r, 1);
  VertexSet flat = r.parallel_copies[1][0];
  CHECK(std::includes(f.P.begin(), f.P.end(), flat.begin(), flat.end()));
  CHECK(hausdorff(r.ambient, f.P, flat) <= r.constants.alpha);
  auto t = tree_instance(oracle::random_tree(15, 2));
  CHECK(product_region(t, 0).P.size() == 15);
}

TEST_CASE("gate formulas") {
  auto h = grid_instance({{8, 8}});
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    auto c = check_gate_formulas(h, static_cast<Domain>(u));
    CHECK(c.pass);
    CHECK(c.observed == Length());
  }
  auto r = relative_instance(default_relative_spec());
  for (std::size_t u = 0; u < r.domain_count(); ++u) CHECK(check_gate_formulas(r, static_cast<Domain>(u)).pass);
}

TEST_CASE("distance formula") {
  auto h = grid_instance({{10, 10}});
  auto f = distance_formula(h, Length::units(1));
  CHECK(f.K == Length::units(1));
  CHECK(f.C == Length());
  CHECK(f.violations == 0);
  CHECK(f.exhaustive);
  CHECK(f.pairs == 4950);
  CHECK(*f.s0 == Length::units(1));
  for (int x = 0; x < 100; x += 7)
    for (int y = 0; y < 100; y += 3) CHECK(clipped_sum(h, x, y, Length::units(1)) == h.ambient.d(x, y));
  auto t = tree_instance(oracle::random_tree(60, 5));
  auto ft = distance_formula(t, Length::units(1));
  CHECK(ft.K == Length::units(1));
  CHECK(ft.C == Length());
  CHECK_THROWS(distance_formula(h, Length()));
  auto small = distance_formula(relative_instance(default_relative_spec()), Length::units(2));
  auto spec = default_relative_spec();
  spec.tree = binary_tree(5);
  spec.attachments = {"t31", "t62"};
  auto big = distance_formula(relative_instance(spec), Length::units(2));
  CHECK(small.K == big.K);
  CHECK(small.C == big.C);
}

TEST_CASE("unparameterized quasigeodesics agree with brute force") {
  auto p = oracle::path(6);
  auto d = oracle::floyd_warshall(p);
  Rng rng(17);
  int agree = 0;
  for (int trial = 0; trial < 600; ++trial) {
    std::size_t m = 2 + rng.below(8);
    std::vector<int> seq{static_cast<int>(rng.below(7))};
    for (std::size_t i = 1; i < m; ++i) {
      int step = static_cast<int>(rng.below(3)) - 1;
      seq.push_back(std::clamp(seq.back() + step, 0, 6));
    }
    std::int64_t D = 1 + static_cast<std::int64_t>(rng.below(2));
    std::vector<VertexSet> s;
    for (int v : seq) s.push_back({v});
    bool fast = unparameterized_quasigeodesic(p, s, Length::units(D));
    bool slow = brute_unparameterized(d, seq, D);
    CHECK(fast == slow);
    agree += fast == slow;
  }
  CHECK(agree == 600);
}

TEST_CASE("hierarchy paths") {
  auto h = grid_instance({{10, 10}});
  std::vector<Vertex> stair;
  for (int i = 0; i < 10; ++i) {
    stair.push_back(h.ambient.at(oracle::cell(i, i)));
    if (i < 9) stair.push_back(h.ambient.at(oracle::cell(i + 1, i)));
  }
  CHECK(verify_hierarchy_path(h, stair, Length::units(1)).ok);
  std::vector<Vertex> back;
  for (int i : {0, 1, 2, 3, 4, 5, 4, 3, 2, 3, 4, 5, 6}) back.push_back(h.ambient.at(oracle::cell(i, 0)));
  auto v = verify_hierarchy_path(h, back, Length::units(1));
  CHECK_FALSE(v.ok);
  CHECK(verify_hierarchy_path(h, {h.ambient.at("0,0"), h.ambient.at("0,1")}, Length::units(1)).ok);
  CHECK_FALSE(verify_hierarchy_path(h, {h.ambient.at("0,0"), h.ambient.at("5,5")}, Length::units(1)).ok);
  auto s = find_hierarchy_path(h, h.ambient.at("0,0"), h.ambient.at("9,9"), Length::units(1));
  REQUIRE(s.path);
  CHECK(s.path->size() == 19);
  auto r = relative_instance(default_relative_spec());
  auto sr = find_hierarchy_path(r, r.ambient.at("F1:4,4"), r.ambient.at("F2:4,4"), Length::units(1));
  REQUIRE(sr.path);
  CHECK(verify_hierarchy_path(r, *sr.path, Length::units(1)).ok);
  CHECK(std::find(sr.path->begin(), sr.path->end(), r.ambient.at("t15")) != sr.path->end());
  CHECK(std::find(sr.path->begin(), sr.path->end(), r.ambient.at("t30")) != sr.path->end());
}

TEST_CASE("hull construction") {
  auto h = grid_instance({{10, 10}});
  auto hull = build_hull(h, h.ambient.at("3,3"), Length::units(1));
  CHECK(hull.A.size() == 100);
  CHECK(hull.ball_contained);
  CHECK(hull.claims);
  auto zero = build_hull(h, h.ambient.at("3,3"), Length());
  CHECK(contains(zero.A, h.ambient.at("3,3")));
  CHECK(zero.trace.front().contains_neighborhood);
  auto r = relative_instance(default_relative_spec());
  for (const char* c : {"t0", "F1:4,4"}) {
    auto hr = build_hull(r, r.ambient.at(c), Length::units(1));
    CHECK(hr.ball_contained);
    CHECK(hr.claims);
  }
}
