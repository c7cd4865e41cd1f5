#include "hhs/factored.hpp"

#include <algorithm>
#include <sstream>

#include "hhs/errors.hpp"
#include "hhs/instances.hpp"
#include "hhs/realization.hpp"
#include "hhs/rng.hpp"

namespace hhs {

bool is_nesting_closed(const DomainIndex& d, const std::vector<Domain>& U) {
  for (Domain u : U)
    for (std::size_t v = 0; v < d.size(); ++v)
      if (d.nested(static_cast<Domain>(v), u) && std::find(U.begin(), U.end(), static_cast<Domain>(v)) == U.end())
        return false;
  return true;
}

std::vector<Domain> domains_from_names(const HierarchicalStructure& h, const std::string& csv) {
  std::vector<Domain> out;
  std::string item;
  // names may contain commas inside braces, so split only at depth 0
  int depth = 0;
  for (char c : csv + ",") {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ',' && depth == 0) {
      if (!item.empty()) out.push_back(h.index.at(item));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Domain> all_proper(const HierarchicalStructure& h) {
  Domain top = h.top();
  std::vector<Domain> out;
  for (std::size_t u = 0; u < h.domain_count(); ++u)
    if (static_cast<Domain>(u) != top) out.push_back(static_cast<Domain>(u));
  return out;
}

FactoredSpace factor(const HierarchicalStructure& h, std::vector<Domain> U, bool cone_product_regions) {
  std::sort(U.begin(), U.end());
  U.erase(std::unique(U.begin(), U.end()), U.end());
  for (Domain u : U)
    if (u < 0 || static_cast<std::size_t>(u) >= h.domain_count()) throw std::out_of_range("factor: unknown domain");
  if (!is_nesting_closed(h.index, U)) throw StructuralError("factor: the domain set is not closed under nesting");
  FactoredSpace f;
  f.factored = U;
  f.cone_product_regions = cone_product_regions;
  const auto& X = h.ambient;
  std::vector<VertexSet> cliques;
  for (Domain u : U) {
    if (cone_product_regions) {
      cliques.push_back(product_region(h, u).P);
    } else {
      const auto& pc = h.parallel_copies[static_cast<std::size_t>(u)];
      if (pc.empty()) throw StructuralError("factor: no parallel copies recorded for '" + h.index.name(u) + "'");
      for (const auto& c : pc) {
        if (c.empty()) throw StructuralError("factor: empty parallel copy for '" + h.index.name(u) + "'");
        cliques.push_back(c);
      }
    }
  }
  if (!cliques.empty() && !X.unit_weight())
    throw StructuralError("factor: cone edges realize min{1,d} only on unit-weight ambients");
  double work = 0;
  for (const auto& c : cliques) work += 0.5 * static_cast<double>(c.size()) * static_cast<double>(c.size());
  if (work > 2e7) throw BudgetError("factor: cone cliques would add too many edges");
  GraphBuilder b;
  for (std::size_t v = 0; v < X.size(); ++v) b.add_vertex(X.id(static_cast<Vertex>(v)));
  std::size_t base = 0;
  for (std::size_t v = 0; v < X.size(); ++v)
    for (const Arc& a : X.neighbors(static_cast<Vertex>(v)))
      if (static_cast<std::size_t>(a.to) > v) {
        b.add_edge(static_cast<Vertex>(v), a.to, Length::from_ticks(a.w));
        ++base;
      }
  for (const auto& c : cliques)
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = i + 1; j < c.size(); ++j) b.add_edge(c[i], c[j]);
  f.graph = b.build();
  f.cone_edges = f.graph.edge_count() - base;

  // induced structure over the remaining domains
  std::vector<Domain> keep;
  std::vector<int> remap(h.domain_count(), -1);
  for (std::size_t u = 0; u < h.domain_count(); ++u)
    if (!std::binary_search(U.begin(), U.end(), static_cast<Domain>(u))) {
      remap[u] = static_cast<int>(keep.size());
      keep.push_back(static_cast<Domain>(u));
    }
  HierarchicalStructure& g = f.induced;
  g.name = h.name + "/factored";
  g.ambient = f.graph;
  std::vector<std::string> names;
  for (Domain u : keep) names.push_back(h.index.name(u));
  g.index = DomainIndex(names);
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j) {
      g.index.set_nested(static_cast<Domain>(i), static_cast<Domain>(j), h.index.nested(keep[i], keep[j]));
      g.index.set_orthogonal(static_cast<Domain>(i), static_cast<Domain>(j), h.index.orthogonal(keep[i], keep[j]));
    }
  for (Domain u : keep) {
    g.spaces.push_back(h.space(u));
    g.hyperbolic.push_back(h.hyperbolic[static_cast<std::size_t>(u)]);
    g.proj.push_back(h.proj[static_cast<std::size_t>(u)]);
    g.parallel_copies.push_back(h.parallel_copies[static_cast<std::size_t>(u)]);
  }
  for (const auto& [k, s] : h.rho_set)
    if (remap[static_cast<std::size_t>(k.first)] >= 0 && remap[static_cast<std::size_t>(k.second)] >= 0)
      g.rho_set[{remap[static_cast<std::size_t>(k.first)], remap[static_cast<std::size_t>(k.second)]}] = s;
  for (const auto& [k, m] : h.rho_map)
    if (remap[static_cast<std::size_t>(k.first)] >= 0 && remap[static_cast<std::size_t>(k.second)] >= 0)
      g.rho_map[{remap[static_cast<std::size_t>(k.first)], remap[static_cast<std::size_t>(k.second)]}] = m;
  g.constants = h.constants;
  g.constants.complexity = keep.empty() ? 0 : g.index.longest_chain();
  nlohmann::json fn = nlohmann::json::array();
  for (Domain u : U) fn.push_back(h.index.name(u));
  g.meta = {{"kind", "factored"}, {"source", h.meta}, {"factored", fn}, {"cone_product_regions", cone_product_regions}};
  return f;
}

FactoredCheck check_factored_hhs(const HierarchicalStructure& h, const std::vector<Domain>& U, const CheckOptions& opt) {
  FactoredCheck c;
  if (U.empty()) {
    c.reports = run_axiom_suite(h, "all", opt);
    c.constants = h.constants;
    c.pass = all_pass(c.reports);
    return c;
  }
  FactoredSpace f = factor(h, U);
  if (f.induced.domain_count() == 0) {
    CheckReport r;
    r.check = "relations";
    r.details["note"] = "every domain was factored";
    c.reports.push_back(r);
    return c;
  }
  f.induced.constants = calibrate_constants(f.induced, opt);
  c.constants = f.induced.constants;
  c.reports = run_axiom_suite(f.induced, "all", opt);
  c.pass = all_pass(c.reports);
  return c;
}

ThetaTable factored_uniqueness_profile(const HierarchicalStructure& h, const std::vector<Domain>& U,
                                       const CheckOptions& opt) {
  FactoredSpace f = factor(h, U);
  const auto& g = f.induced;
  bool exhaustive = true;
  auto pairs = scan_pairs(g.ambient.size(), opt, exhaustive);
  std::vector<std::pair<Length, Length>> sd;
  for (auto [x, y] : pairs) {
    Length s;
    for (std::size_t u = 0; u < g.domain_count(); ++u) s = max(s, g.du(static_cast<Domain>(u), x, y));
    sd.emplace_back(s, g.ambient.d(x, y));
  }
  ThetaTable t;
  for (std::int64_t k : opt.kappa_ladder) {
    Length m;
    for (auto& [s, d] : sd)
      if (s < Length::units(k)) m = max(m, d);
    t[k] = m;
  }
  return t;
}

QiFit maximal_coning_qi(const HierarchicalStructure& h, const CheckOptions& opt) {
  Domain S = h.top();
  FactoredSpace f = factor(h, all_proper(h));
  bool exhaustive = true;
  auto pairs = scan_pairs(h.ambient.size(), opt, exhaustive);
  std::vector<DistancePair> dp;
  for (auto [x, y] : pairs) {
    if (h.pi(S, x).empty() || h.pi(S, y).empty()) throw StructuralError("maximal_coning_qi: projection to the top domain is not total");
    dp.push_back({h.du(S, x, y), f.graph.d(x, y)});
  }
  if (dp.empty()) return {};
  return qi_fit(dp);
}

CheckReport verify_friendship_lemmas(const HierarchicalStructure& h, const FriendshipOptions& opt) {
  CheckReport r;
  r.check = "friendship";
  const auto& c = h.constants;
  const Length alpha = c.alpha;
  const Length gap = opt.gap ? *opt.gap : alpha + alpha + c.E + c.kappa0;
  r.bound = gap;
  const auto& I = h.index;
  const std::size_t n = h.domain_count();
  std::vector<std::optional<ProductRegion>> pr(n);
  for (std::size_t u = 0; u < n; ++u) {
    try {
      pr[u] = product_region(h, static_cast<Domain>(u));
    } catch (const StructuralError&) {
    }
  }
  Rng rng(opt.seed);
  nlohmann::json listed = nlohmann::json::array();
  for (std::size_t ui = 0; ui < n; ++ui)
    for (std::size_t vi = 0; vi < n; ++vi) {
      if (ui == vi || !pr[ui] || !pr[vi]) continue;
      Domain U = static_cast<Domain>(ui), V = static_cast<Domain>(vi);
      const VertexSet& PV = pr[vi]->P;
      std::vector<Vertex> p0s;
      if (PV.size() <= opt.points_per_pair) {
        p0s = PV;
      } else {
        for (std::size_t i : rng.sample(PV.size(), opt.points_per_pair)) p0s.push_back(PV[i]);
        r.exhaustive = false;
      }
      for (Vertex p0 : p0s) {
        Vertex p = gate(h, pr[ui]->P, p0).point;
        Vertex q = gate(h, PV, p).point;
        for (std::size_t wi = 0; wi < n; ++wi) {
          Domain W = static_cast<Domain>(wi);
          ++r.scanned;
          Length d = h.du(W, p, q);
          r.observed = max(r.observed, d);
          if (d <= gap) continue;
          bool unfriendly = !is_friendly(I, W, U) && !is_friendly(I, W, V);
          Length sep;
          bool separated = false;
          if (unfriendly) {
            sep = h.du_sets(W, h.rho(U, W), h.rho(V, W));
            separated = sep + alpha + alpha > gap;
          }
          nlohmann::json e{{"U", I.name(U)}, {"V", I.name(V)}, {"W", I.name(W)}, {"p", h.ambient.id(p)}, {"q", h.ambient.id(q)},
                           {"gap", d}, {"unfriendly", unfriendly}};
          if (unfriendly) e["rho_separation"] = sep;
          if (listed.size() < 200 && std::find(listed.begin(), listed.end(), e) == listed.end()) listed.push_back(e);
          if (!(unfriendly && separated) && r.pass) {
            r.pass = false;
            r.witness = e;
          }
        }
      }
    }
  r.details["listed"] = listed;
  return r;
}

}  // namespace hhs
