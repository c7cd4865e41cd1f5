#include "hhs/axioms.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "hhs/errors.hpp"
#include "hhs/metric.hpp"
#include "hhs/rng.hpp"

namespace hhs {

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j{{"check", r.check},         {"pass", r.pass},         {"exhaustive", r.exhaustive},
                   {"scanned", r.scanned},     {"observed", r.observed}, {"bound", r.bound}};
  if (!r.witness.is_null()) j["witness"] = r.witness;
  if (!r.details.empty()) j["details"] = r.details;
  return j;
}

bool all_pass(const std::vector<CheckReport>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const CheckReport& r) { return r.pass; });
}

std::vector<std::pair<Vertex, Vertex>> scan_pairs(std::size_t n, const CheckOptions& opt, bool& exhaustive) {
  std::vector<std::pair<Vertex, Vertex>> out;
  const std::size_t total = n < 2 ? 0 : n * (n - 1) / 2;
  exhaustive = total <= opt.pair_budget;
  if (exhaustive) {
    out.reserve(total);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x + 1; y < n; ++y) out.emplace_back(static_cast<Vertex>(x), static_cast<Vertex>(y));
    return out;
  }
  Rng rng(opt.seed);
  std::set<std::pair<Vertex, Vertex>> seen;
  while (seen.size() < opt.sample_pairs) {
    Vertex x = static_cast<Vertex>(rng.below(n)), y = static_cast<Vertex>(rng.below(n));
    if (x == y) continue;
    seen.emplace(std::min(x, y), std::max(x, y));
  }
  return {seen.begin(), seen.end()};
}

namespace {

nlohmann::json dn(const HierarchicalStructure& h, Domain u) { return h.index.name(u); }
nlohmann::json xn(const HierarchicalStructure& h, Vertex x) { return h.ambient.id(x); }

struct Worst {
  Length value;
  nlohmann::json witness;
  bool any = false;
  void offer(Length v, const std::function<nlohmann::json()>& w) {
    if (!any || v > value) {
      value = v;
      witness = w();
      any = true;
    }
  }
};

}  // namespace

CheckReport check_relations(const DomainIndex& d, int recorded_complexity) {
  CheckReport r;
  r.check = "relations";
  const std::size_t n = d.size();
  nlohmann::json fails = nlohmann::json::array();
  auto fail = [&](const std::string& what, nlohmann::json tuple) {
    fails.push_back({{"invariant", what}, {"tuple", std::move(tuple)}});
  };
  auto nm = [&](std::size_t u) { return d.name(static_cast<Domain>(u)); };
  for (std::size_t u = 0; u < n; ++u) {
    Domain U = static_cast<Domain>(u);
    if (!d.nested(U, U)) fail("nesting reflexive", {nm(u)});
    if (d.orthogonal(U, U)) fail("orthogonality anti-reflexive", {nm(u)});
    for (std::size_t v = 0; v < n; ++v) {
      Domain V = static_cast<Domain>(v);
      ++r.scanned;
      if (u != v && d.nested(U, V) && d.nested(V, U)) fail("nesting antisymmetric", {nm(u), nm(v)});
      if (d.orthogonal(U, V) != d.orthogonal(V, U)) fail("orthogonality symmetric", {nm(u), nm(v)});
      if (d.orthogonal(U, V) && (d.nested(U, V) || d.nested(V, U))) fail("orthogonal pairs incomparable", {nm(u), nm(v)});
      for (std::size_t w = 0; w < n; ++w) {
        Domain W = static_cast<Domain>(w);
        if (d.nested(U, V) && d.nested(V, W) && !d.nested(U, W)) fail("nesting transitive", {nm(u), nm(v), nm(w)});
        // V ⊑ W and W ⊥ U imply V ⊥ U
        if (d.nested(V, W) && d.orthogonal(W, U) && !d.orthogonal(V, U)) fail("orthogonality inherited", {nm(v), nm(w), nm(u)});
      }
    }
  }
  if (n > 0 && !d.top()) {
    nlohmann::json m = nlohmann::json::array();
    for (Domain x : d.maximal_elements()) m.push_back(d.name(x));
    fail("unique maximal element", m);
  }
  for (std::size_t t = 0; t < n; ++t) {
    Domain T = static_cast<Domain>(t);
    auto sub = d.nested_in(T);
    for (Domain U : sub) {
      std::vector<Domain> partners;
      for (Domain V : sub)
        if (d.orthogonal(V, U)) partners.push_back(V);
      if (partners.empty()) continue;
      bool found = false;
      for (Domain W : sub) {
        if (W == T) continue;
        if (std::all_of(partners.begin(), partners.end(), [&](Domain V) { return d.nested(V, W); })) {
          found = true;
          break;
        }
      }
      if (!found) fail("orthogonality container", {d.name(T), d.name(U)});
    }
  }
  int chain = 0;
  try {
    chain = d.longest_chain();
  } catch (const StructuralError& e) {
    fail("nesting acyclic", {e.what()});
  }
  r.details["longest_chain"] = chain;
  r.observed = Length::units(chain);
  r.bound = Length::units(recorded_complexity);
  if (chain != recorded_complexity) fail("complexity matches longest chain", {chain, recorded_complexity});
  r.pass = fails.empty();
  if (!fails.empty()) r.witness = fails[0];
  r.details["violations"] = fails;
  return r;
}

CheckReport check_structure(const HierarchicalStructure& h) {
  CheckReport r;
  r.check = "structure";
  r.bound = h.constants.proj_diam;
  if (auto err = validate_structure(h)) {
    r.pass = false;
    r.witness = *err;
    return r;
  }
  Worst w;
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    Domain U = static_cast<Domain>(u);
    for (std::size_t x = 0; x < h.ambient.size(); ++x) {
      ++r.scanned;
      w.offer(set_diameter(h.space(U), h.proj[u][x]), [&] {
        return nlohmann::json{{"projection", dn(h, U)}, {"x", xn(h, static_cast<Vertex>(x))}};
      });
    }
  }
  for (const auto& [k, s] : h.rho_set) {
    ++r.scanned;
    w.offer(set_diameter(h.space(k.second), s), [&] { return nlohmann::json{{"rho", {dn(h, k.first), dn(h, k.second)}}}; });
  }
  r.observed = w.value;
  r.pass = w.value <= h.constants.proj_diam;
  if (!r.pass) r.witness = w.witness;
  return r;
}

CheckReport check_constants(const HierarchicalStructure& h) {
  CheckReport r;
  r.check = "constants";
  const auto& c = h.constants;
  nlohmann::json fails = nlohmann::json::array();
  if (c.E < max(c.proj_diam, c.kappa0)) fails.push_back("E below max(proj_diam, kappa0)");
  if (c.E < c.delta) fails.push_back("E below delta");
  if (c.lambda < Length::units(1)) fails.push_back("lambda below 1");
  for (const ThetaTable* t : {&c.theta_u, &c.theta_realize}) {
    Length prev = Length::units(-1);
    for (auto& [k, v] : *t) {
      if (v < prev) fails.push_back("theta table not monotone at " + std::to_string(k));
      prev = v;
    }
  }
  r.pass = fails.empty();
  if (!r.pass) r.witness = fails;
  r.observed = c.E;
  r.bound = max(max(c.proj_diam, c.kappa0), c.delta);
  return r;
}

CheckReport check_hyperbolicity(const HierarchicalStructure& h, const CheckOptions& opt) {
  CheckReport r;
  r.check = "hyperbolicity";
  r.bound = h.constants.delta;
  auto minimal = h.index.minimal_elements();
  Worst w;
  nlohmann::json per = nlohmann::json::object();
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    Domain U = static_cast<Domain>(u);
    if (!h.hyperbolic[u]) {
      if (!std::binary_search(minimal.begin(), minimal.end(), U)) {
        r.pass = false;
        r.witness = {{"non_hyperbolic_non_minimal", dn(h, U)}};
      }
      continue;
    }
    if (!h.space(U).connected()) {
      r.pass = false;
      r.witness = {{"disconnected_space", dn(h, U)}};
      continue;
    }
    DeltaOptions dopt;
    dopt.seed = opt.seed;
    DeltaEstimate e = gromov_delta(h.space(U), dopt);
    if (!e.exhaustive) r.exhaustive = false;
    r.scanned += e.pool;
    per[h.index.name(U)] = e.delta;
    w.offer(e.delta, [&] { return nlohmann::json{{"domain", dn(h, U)}, {"delta", e.delta}}; });
  }
  r.details["delta"] = per;
  r.observed = w.value;
  if (w.value > h.constants.delta) {
    r.pass = false;
    r.witness = w.witness;
  }
  return r;
}

CheckReport check_projections(const HierarchicalStructure& h, const CheckOptions& opt) {
  CheckReport r;
  r.check = "projections";
  r.bound = h.constants.lipschitz;
  if (!h.ambient.connected()) throw UnreachableError("check_projections: ambient space is disconnected");
  bool ex = true;
  auto pairs = scan_pairs(h.ambient.size(), opt, ex);
  r.exhaustive = ex;
  std::int64_t K = 1;
  nlohmann::json wit;
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    Domain U = static_cast<Domain>(u);
    for (auto [x, y] : pairs) {
      ++r.scanned;
      Length dU = h.du(U, x, y);
      Length d = h.ambient.d(x, y);
      std::int64_t need = dU.div_ceil(d + Length::units(1)).ceil_units();
      if (need > K) {
        K = need;
        wit = {{"domain", dn(h, U)}, {"x", xn(h, x)}, {"y", xn(h, y)}, {"d", d}, {"dU", dU}};
      }
    }
  }
  r.observed = Length::units(K);
  r.pass = r.observed <= h.constants.lipschitz;
  if (!r.pass) r.witness = wit;
  return r;
}

CheckReport check_consistency(const HierarchicalStructure& h) {
  CheckReport r;
  r.check = "consistency";
  r.bound = h.constants.kappa0;
  const auto& I = h.index;
  const std::size_t n = h.domain_count();
  Worst w;
  for (std::size_t vi = 0; vi < n; ++vi)
    for (std::size_t wi = 0; wi < n; ++wi) {
      Domain V = static_cast<Domain>(vi), W = static_cast<Domain>(wi);
      if (I.transverse(V, W) && vi < wi) {
        const VertexSet& rVW = h.rho(V, W);
        const VertexSet& rWV = h.rho(W, V);
        for (std::size_t x = 0; x < h.ambient.size(); ++x) {
          ++r.scanned;
          Vertex X = static_cast<Vertex>(x);
          Length a = h.du_sets(W, h.pi(W, X), rVW);
          if (a <= Length()) continue;
          Length b = h.du_sets(V, h.pi(V, X), rWV);
          w.offer(min(a, b), [&] { return nlohmann::json{{"transverse", {dn(h, V), dn(h, W)}}, {"x", xn(h, X)}}; });
        }
      } else if (I.proper_nested(V, W)) {
        const VertexSet& rVW = h.rho(V, W);
        for (std::size_t x = 0; x < h.ambient.size(); ++x) {
          ++r.scanned;
          Vertex X = static_cast<Vertex>(x);
          Length a = h.du_sets(W, h.pi(W, X), rVW);
          if (a <= Length()) continue;
          VertexSet s = set_union(h.pi(V, X), h.rho_image(W, V, h.pi(W, X)));
          Length b = set_diameter(h.space(V), s);
          w.offer(min(a, b), [&] { return nlohmann::json{{"nested", {dn(h, V), dn(h, W)}}, {"x", xn(h, X)}}; });
        }
      }
    }
  // U ⊊ V, and V ⊊ W or (V ⋔ W and W not ⊥ U): d_W(ρ^U_W, ρ^V_W) ≤ κ₀
  for (std::size_t ui = 0; ui < n; ++ui)
    for (std::size_t vi = 0; vi < n; ++vi) {
      Domain U = static_cast<Domain>(ui), V = static_cast<Domain>(vi);
      if (!I.proper_nested(U, V)) continue;
      for (std::size_t wi = 0; wi < n; ++wi) {
        Domain W = static_cast<Domain>(wi);
        bool applies = I.proper_nested(V, W) || (I.transverse(V, W) && !I.orthogonal(W, U));
        if (!applies || W == U) continue;
        if (!(I.proper_nested(U, W) || I.transverse(U, W))) continue;
        ++r.scanned;
        Length d = h.du_sets(W, h.rho(U, W), h.rho(V, W));
        w.offer(d, [&] { return nlohmann::json{{"rho_pair", {dn(h, U), dn(h, V), dn(h, W)}}}; });
      }
    }
  r.observed = w.value;
  r.pass = w.value <= h.constants.kappa0;
  if (!r.pass) r.witness = w.witness;
  return r;
}

CheckReport check_rho_consistency(const HierarchicalStructure& h) {
  CheckReport r;
  r.check = "rho_consistency";
  r.bound = h.constants.kappa1;
  const auto& I = h.index;
  const std::size_t n = h.domain_count();
  auto has_rho = [&](Domain a, Domain b) { return I.proper_nested(a, b) || I.transverse(a, b); };
  Worst w;
  for (std::size_t ui = 0; ui < n; ++ui)
    for (std::size_t vi = 0; vi < n; ++vi)
      for (std::size_t wi = 0; wi < n; ++wi) {
        Domain U = static_cast<Domain>(ui), V = static_cast<Domain>(vi), W = static_cast<Domain>(wi);
        if (!has_rho(U, V) || !has_rho(U, W)) continue;
        if (I.transverse(V, W)) {
          ++r.scanned;
          Length a = h.du_sets(W, h.rho(U, W), h.rho(V, W));
          Length b = h.du_sets(V, h.rho(U, V), h.rho(W, V));
          w.offer(min(a, b), [&] { return nlohmann::json{{"transverse", {dn(h, U), dn(h, V), dn(h, W)}}}; });
        } else if (I.proper_nested(V, W)) {
          ++r.scanned;
          Length a = h.du_sets(W, h.rho(U, W), h.rho(V, W));
          VertexSet s = set_union(h.rho(U, V), h.rho_image(W, V, h.rho(U, W)));
          Length b = set_diameter(h.space(V), s);
          w.offer(min(a, b), [&] { return nlohmann::json{{"nested", {dn(h, U), dn(h, V), dn(h, W)}}}; });
        }
      }
  r.observed = w.value;
  r.pass = w.value <= h.constants.kappa1;
  if (!r.pass) r.witness = w.witness;
  return r;
}

CheckReport check_orth_close(const HierarchicalStructure& h) {
  CheckReport r;
  r.check = "orth_close";
  r.bound = h.constants.E * 2;
  const auto& I = h.index;
  Worst w;
  for (std::size_t wi = 0; wi < h.domain_count(); ++wi) {
    Domain W = static_cast<Domain>(wi);
    auto sub = I.nested_in(W);
    for (Domain U : sub)
      for (Domain V : sub) {
        if (U == W || V == W || U >= V || !I.orthogonal(U, V)) continue;
        ++r.scanned;
        Length d = h.du_sets(W, h.rho(U, W), h.rho(V, W));
        w.offer(d, [&] { return nlohmann::json{{"W", dn(h, W)}, {"U", dn(h, U)}, {"V", dn(h, V)}}; });
      }
  }
  r.observed = w.value;
  r.pass = w.value <= r.bound;
  if (!r.pass) r.witness = w.witness;
  return r;
}

CheckReport check_bgi(const HierarchicalStructure& h, const CheckOptions& opt) {
  CheckReport r;
  r.check = "bounded_geodesic_image";
  r.bound = h.constants.E;
  const auto& I = h.index;
  const Length E = h.constants.E;
  Worst w;
  for (std::size_t wi = 0; wi < h.domain_count(); ++wi) {
    Domain W = static_cast<Domain>(wi);
    const FiniteMetricGraph& CW = h.space(W);
    if (CW.size() < 2) continue;
    bool ex = true;
    auto pairs = scan_pairs(CW.size(), opt, ex);
    if (!ex) r.exhaustive = false;
    for (std::size_t vi = 0; vi < h.domain_count(); ++vi) {
      Domain V = static_cast<Domain>(vi);
      if (!I.proper_nested(V, W)) continue;
      DistRow near = CW.row_to_set(h.rho(V, W));
      const auto& m = h.rho_down(W, V);
      const FiniteMetricGraph& CV = h.space(V);
      // single vertices first: a one-point geodesic
      for (std::size_t a = 0; a < CW.size(); ++a) {
        if (near[static_cast<Vertex>(a)] <= E.ticks()) continue;
        ++r.scanned;
        Length d = set_diameter(CV, m[a]);
        w.offer(d, [&] { return nlohmann::json{{"W", dn(h, W)}, {"V", dn(h, V)}, {"a", CW.id(static_cast<Vertex>(a))}}; });
      }
      for (auto [a, b] : pairs) {
        if (near[a] <= E.ticks() || near[b] <= E.ticks()) continue;
        ++r.scanned;
        VertexSet iv = interval(CW, a, b);
        bool touches = std::any_of(iv.begin(), iv.end(), [&](Vertex z) { return near[z] <= E.ticks(); });
        if (touches) continue;
        VertexSet img;
        for (Vertex z : iv) img.insert(img.end(), m[static_cast<std::size_t>(z)].begin(), m[static_cast<std::size_t>(z)].end());
        img = normalized(std::move(img));
        Length d = set_diameter(CV, img);
        w.offer(d, [&] {
          return nlohmann::json{{"W", dn(h, W)}, {"V", dn(h, V)}, {"a", CW.id(a)}, {"b", CW.id(b)}, {"diam", d}};
        });
      }
    }
  }
  r.observed = w.value;
  r.pass = w.value <= E;
  if (!r.pass) r.witness = w.witness;
  return r;
}

CheckReport check_large_links(const HierarchicalStructure& h, const CheckOptions& opt) {
  CheckReport r;
  r.check = "large_links";
  r.bound = h.constants.lambda;
  const auto& I = h.index;
  const Length E = h.constants.E, lam = h.constants.lambda;
  bool ex = true;
  auto pairs = scan_pairs(h.ambient.size(), opt, ex);
  r.exhaustive = ex;
  Length need_lambda = Length::units(1);
  std::size_t max_witnesses = 0;
  nlohmann::json fail_wit;
  for (std::size_t wi = 0; wi < h.domain_count(); ++wi) {
    Domain W = static_cast<Domain>(wi);
    std::vector<Domain> proper;
    for (Domain T : I.nested_in(W))
      if (T != W) proper.push_back(T);
    if (proper.empty()) continue;
    for (auto [x, y] : pairs) {
      ++r.scanned;
      std::vector<Domain> relevant;
      for (Domain T : proper)
        if (h.du(T, x, y) >= E) relevant.push_back(T);
      if (relevant.empty()) continue;
      Length dW = h.du(W, x, y);
      Length N = dW.times(lam) + lam;
      std::vector<std::pair<Domain, Length>> cands;
      for (Domain T : proper) {
        Length dr = h.du_sets(W, h.pi(W, x), h.rho(T, W));
        if (dr <= N) cands.emplace_back(T, dr);
      }
      std::vector<char> covered(relevant.size(), 0);
      std::vector<std::pair<Domain, Length>> chosen;
      for (;;) {
        std::size_t left = static_cast<std::size_t>(std::count(covered.begin(), covered.end(), 0));
        if (left == 0) break;
        std::size_t best = 0;
        std::size_t best_i = cands.size();
        for (std::size_t c = 0; c < cands.size(); ++c) {
          std::size_t k = 0;
          for (std::size_t i = 0; i < relevant.size(); ++i)
            if (!covered[i] && I.nested(relevant[i], cands[c].first)) ++k;
          if (k > best) {
            best = k;
            best_i = c;
          }
        }
        if (best_i == cands.size()) break;
        chosen.push_back(cands[best_i]);
        for (std::size_t i = 0; i < relevant.size(); ++i)
          if (I.nested(relevant[i], cands[best_i].first)) covered[i] = 1;
      }
      bool all_covered = std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
      max_witnesses = std::max(max_witnesses, chosen.size());
      Length denom = dW + Length::units(1);
      Length local = Length::units(static_cast<std::int64_t>(chosen.size())).div_ceil(denom);
      for (auto& [T, dr] : chosen) local = max(local, dr.div_ceil(denom));
      need_lambda = max(need_lambda, local);
      bool ok = all_covered && static_cast<std::int64_t>(chosen.size()) <= N.floor_units();
      if (!ok && r.pass) {
        r.pass = false;
        nlohmann::json ws = nlohmann::json::array();
        for (auto& [T, dr] : chosen) ws.push_back(dn(h, T));
        fail_wit = {{"W", dn(h, W)}, {"x", xn(h, x)}, {"y", xn(h, y)}, {"N", N}, {"witnesses", ws}, {"all_covered", all_covered}};
      }
    }
  }
  r.observed = need_lambda;
  r.details["max_witnesses"] = max_witnesses;
  if (!r.pass) r.witness = fail_wit;
  return r;
}

namespace {

// Pairwise-orthogonal families (cliques of ⊥), nonempty, in lexicographic order.
std::vector<std::vector<Domain>> orthogonal_families(const DomainIndex& I) {
  std::vector<std::vector<Domain>> out;
  std::vector<Domain> cur;
  std::function<void(Domain)> rec = [&](Domain start) {
    for (Domain u = start; u < static_cast<Domain>(I.size()); ++u) {
      bool ok = std::all_of(cur.begin(), cur.end(), [&](Domain v) { return I.orthogonal(u, v); });
      if (!ok) continue;
      cur.push_back(u);
      out.push_back(cur);
      rec(u + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

CheckReport check_partial_realization(const HierarchicalStructure& h, const CheckOptions& opt) {
  CheckReport r;
  r.check = "partial_realization";
  r.bound = h.constants.alpha;
  const auto& I = h.index;
  const std::size_t n = h.domain_count();
  const std::size_t nx = h.ambient.size();
  // image sets π_V(X)
  std::vector<VertexSet> image(n);
  for (std::size_t u = 0; u < n; ++u) {
    VertexSet s;
    for (std::size_t x = 0; x < nx; ++x) s.insert(s.end(), h.proj[u][x].begin(), h.proj[u][x].end());
    image[u] = normalized(std::move(s));
  }
  Rng rng(opt.seed);
  Worst w;
  std::size_t families = 0;
  for (const auto& fam : orthogonal_families(I)) {
    ++families;
    // fixed (family-dependent) target sets: ρ^{V_j}_V for V ⊋ V_j and for V ⋔ V_j
    std::vector<std::pair<Domain, const VertexSet*>> fixed;
    for (Domain Vj : fam)
      for (std::size_t v = 0; v < n; ++v) {
        Domain V = static_cast<Domain>(v);
        if (I.proper_nested(Vj, V) || I.transverse(V, Vj)) fixed.emplace_back(V, &h.rho(Vj, V));
      }
    // fixed part of the cost per ambient point
    std::vector<Length> base(nx);
    for (std::size_t x = 0; x < nx; ++x)
      for (auto& [V, s] : fixed) base[x] = max(base[x], h.du_sets(V, h.pi(V, static_cast<Vertex>(x)), *s));
    // coordinate choices
    double total = 1;
    for (Domain Vj : fam) total *= static_cast<double>(image[static_cast<std::size_t>(Vj)].size());
    const bool exhaustive = total <= static_cast<double>(opt.choice_budget);
    if (!exhaustive) r.exhaustive = false;
    const std::size_t count = exhaustive ? static_cast<std::size_t>(total) : opt.choice_budget;
    std::vector<Vertex> p(fam.size());
    for (std::size_t c = 0; c < count; ++c) {
      std::size_t code = c;
      for (std::size_t j = 0; j < fam.size(); ++j) {
        const VertexSet& im = image[static_cast<std::size_t>(fam[j])];
        std::size_t k = exhaustive ? code % im.size() : rng.below(im.size());
        code /= im.size();
        p[j] = im[k];
      }
      ++r.scanned;
      Length best = Length::units(1) * (1 << 30);
      for (std::size_t x = 0; x < nx; ++x) {
        Length cost = base[x];
        if (cost >= best) continue;
        for (std::size_t j = 0; j < fam.size() && cost < best; ++j)
          cost = max(cost, h.du_sets(fam[j], h.pi(fam[j], static_cast<Vertex>(x)), VertexSet{p[j]}));
        if (cost < best) best = cost;
      }
      w.offer(best, [&] {
        nlohmann::json f = nlohmann::json::array();
        for (std::size_t j = 0; j < fam.size(); ++j) f.push_back({dn(h, fam[j]), h.space(fam[j]).id(p[j])});
        return nlohmann::json{{"family", f}, {"best_cost", best}};
      });
    }
  }
  r.details["families"] = families;
  r.observed = w.value;
  r.pass = w.value <= h.constants.alpha;
  if (!r.pass) r.witness = w.witness;
  return r;
}

namespace {

struct PairProfile {
  std::vector<std::pair<Length, Length>> sd;  // (sup_V d_V, d)
  bool exhaustive = true;
};

PairProfile pair_profile(const HierarchicalStructure& h, const CheckOptions& opt) {
  PairProfile p;
  auto pairs = scan_pairs(h.ambient.size(), opt, p.exhaustive);
  p.sd.reserve(pairs.size());
  for (auto [x, y] : pairs) {
    Length s;
    for (std::size_t u = 0; u < h.domain_count(); ++u) s = max(s, h.du(static_cast<Domain>(u), x, y));
    p.sd.emplace_back(s, h.ambient.d(x, y));
  }
  return p;
}

}  // namespace

ThetaTable uniqueness_profile(const HierarchicalStructure& h, const CheckOptions& opt) {
  PairProfile p = pair_profile(h, opt);
  ThetaTable t;
  for (std::int64_t k : opt.kappa_ladder) {
    Length m;
    for (auto& [s, d] : p.sd)
      if (s < Length::units(k)) m = max(m, d);
    t[k] = m;
  }
  return t;
}

CheckReport empirical_uniqueness(const HierarchicalStructure& h, const CheckOptions& opt) {
  CheckReport r;
  r.check = "uniqueness";
  PairProfile p = pair_profile(h, opt);
  r.exhaustive = p.exhaustive;
  r.scanned = p.sd.size();
  nlohmann::json table = nlohmann::json::object();
  for (std::int64_t k : opt.kappa_ladder) {
    Length m;
    for (auto& [s, d] : p.sd)
      if (s < Length::units(k)) m = max(m, d);
    table[std::to_string(k)] = m;
    auto rec = theta_at(h.constants.theta_u, k);
    if (!rec || m > *rec) {
      if (r.pass) {
        r.witness = {{"kappa", k}, {"observed", m}, {"recorded", rec ? nlohmann::json(*rec) : nlohmann::json(nullptr)}};
        r.observed = m;
        r.bound = rec ? *rec : Length();
      }
      r.pass = false;
    }
  }
  r.details["theta_u"] = table;
  return r;
}

PassingUp check_passing_up(const HierarchicalStructure& h, Length C, const CheckOptions& opt) {
  PassingUp res;
  const auto& I = h.index;
  const Length E = h.constants.E;
  auto pairs = scan_pairs(h.ambient.size(), opt, res.exhaustive);
  std::size_t worst = 0;
  for (std::size_t vi = 0; vi < h.domain_count(); ++vi) {
    Domain V = static_cast<Domain>(vi);
    auto sub = I.nested_in(V);
    for (auto [x, y] : pairs) {
      std::vector<Length> d(h.domain_count());
      for (Domain S : sub) d[static_cast<std::size_t>(S)] = h.du(S, x, y);
      std::vector<Domain> bad;
      for (Domain Si : sub) {
        if (Si == V || d[static_cast<std::size_t>(Si)] < E) continue;
        bool lifted = false;
        for (Domain S : sub)
          if (I.proper_nested(Si, S) && d[static_cast<std::size_t>(S)] >= C) {
            lifted = true;
            break;
          }
        if (!lifted) bad.push_back(Si);
      }
      if (bad.size() > worst) {
        worst = bad.size();
        nlohmann::json b = nlohmann::json::array();
        for (Domain s : bad) b.push_back(dn(h, s));
        res.witness = {{"V", dn(h, V)}, {"x", xn(h, x)}, {"y", xn(h, y)}, {"unlifted", b}};
      }
    }
  }
  res.N = static_cast<int>(worst) + 1;
  return res;
}

RelevantOrder relevant_order(const HierarchicalStructure& h, Vertex x, Vertex y, Length K,
                             std::optional<std::vector<Domain>> antichain) {
  RelevantOrder o;
  const auto& I = h.index;
  const Length E = h.constants.E;
  o.below_threshold = K < E * 100;
  if (antichain) {
    o.domains = *antichain;
  } else {
    std::vector<Domain> rel;
    for (std::size_t u = 0; u < h.domain_count(); ++u)
      if (h.du(static_cast<Domain>(u), x, y) >= K) rel.push_back(static_cast<Domain>(u));
    for (Domain u : rel)
      if (std::none_of(rel.begin(), rel.end(), [&](Domain v) { return I.proper_nested(v, u); })) o.domains.push_back(u);
  }
  const std::size_t m = o.domains.size();
  o.le.assign(m, std::vector<char>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Domain U = o.domains[i], V = o.domains[j];
      if (i == j) {
        o.le[i][j] = 1;
      } else if (I.transverse(U, V)) {
        o.le[i][j] = h.du_sets(U, h.rho(V, U), h.pi(U, y)) <= E;
      }
    }
  for (std::size_t i = 0; i < m && o.partial_order; ++i)
    for (std::size_t j = 0; j < m && o.partial_order; ++j) {
      if (i != j && o.le[i][j] && o.le[j][i]) {
        o.partial_order = false;
        o.diagnostic = "antisymmetry fails for " + I.name(o.domains[i]) + ", " + I.name(o.domains[j]);
      }
      for (std::size_t k = 0; k < m && o.partial_order; ++k)
        if (o.le[i][j] && o.le[j][k] && !o.le[i][k]) {
          o.partial_order = false;
          o.diagnostic = "transitivity fails for " + I.name(o.domains[i]) + ", " + I.name(o.domains[j]) + ", " +
                         I.name(o.domains[k]);
        }
    }
  if (o.partial_order) {
    std::vector<char> used(m, 0);
    for (std::size_t step = 0; step < m; ++step)
      for (std::size_t i = 0; i < m; ++i) {
        if (used[i]) continue;
        bool minimal = true;
        for (std::size_t j = 0; j < m; ++j)
          if (!used[j] && j != i && o.le[j][i]) minimal = false;
        if (minimal) {
          used[i] = 1;
          o.numbering.push_back(o.domains[i]);
          break;
        }
      }
  }
  return o;
}

std::vector<CheckReport> run_axiom_suite(const HierarchicalStructure& h, const std::string& axiom,
                                         const CheckOptions& opt) {
  static const std::set<std::string> known{"all", "relations", "proj", "consistency", "bgi", "links", "realization", "uniqueness"};
  if (!known.count(axiom)) throw std::invalid_argument("unknown axiom selector '" + axiom + "'");
  std::vector<CheckReport> out;
  CheckReport st = check_structure(h);
  out.push_back(st);
  if (!st.pass && st.witness.is_string()) return out;  // tables malformed: nothing else is meaningful
  auto want = [&](const char* a) { return axiom == "all" || axiom == a; };
  if (want("relations")) out.push_back(check_relations(h.index, h.constants.complexity));
  if (axiom == "all") {
    out.push_back(check_constants(h));
    out.push_back(check_hyperbolicity(h, opt));
  }
  if (want("proj")) out.push_back(check_projections(h, opt));
  if (want("consistency")) {
    out.push_back(check_consistency(h));
    out.push_back(check_rho_consistency(h));
    out.push_back(check_orth_close(h));
  }
  if (want("links")) out.push_back(check_large_links(h, opt));
  if (want("bgi")) out.push_back(check_bgi(h, opt));
  if (want("realization")) out.push_back(check_partial_realization(h, opt));
  if (want("uniqueness")) out.push_back(empirical_uniqueness(h, opt));
  return out;
}

}  // namespace hhs
