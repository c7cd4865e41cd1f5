#include "hhs/realization.hpp"

#include <algorithm>
#include <map>

#include "hhs/errors.hpp"
#include "hhs/rng.hpp"

namespace hhs {

namespace {

nlohmann::json dn(const HierarchicalStructure& h, Domain u) { return h.index.name(u); }

// min over p ∈ s of row[p]
std::int64_t row_min(const DistRow& row, const VertexSet& s) {
  std::int64_t m = DistRow::kFar;
  for (Vertex p : s) m = std::min(m, row[p]);
  return m;
}

VertexSet projection_of_set(const HierarchicalStructure& h, Domain u, const VertexSet& Y) {
  VertexSet out;
  for (Vertex y : Y) {
    const auto& p = h.pi(u, y);
    out.insert(out.end(), p.begin(), p.end());
  }
  return normalized(std::move(out));
}

}  // namespace

Tuple point_tuple(const HierarchicalStructure& h, Vertex x) {
  Tuple t;
  for (std::size_t u = 0; u < h.domain_count(); ++u) t.b.push_back(h.pi(static_cast<Domain>(u), x));
  return t;
}

nlohmann::json tuple_to_json(const HierarchicalStructure& h, const Tuple& t) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t u = 0; u < t.b.size(); ++u) {
    nlohmann::json ids = nlohmann::json::array();
    for (Vertex v : t.b[u]) ids.push_back(h.space(static_cast<Domain>(u)).id(v));
    j[h.index.name(static_cast<Domain>(u))] = ids;
  }
  return j;
}

Tuple tuple_from_json(const HierarchicalStructure& h, const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("tuple must be an object keyed by domain name");
  Tuple t;
  t.b.resize(h.domain_count());
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    const std::string& name = h.index.name(static_cast<Domain>(u));
    if (!j.contains(name)) throw ParseError("tuple is missing domain '" + name + "'");
    const auto& c = j.at(name);
    const auto& sp = h.space(static_cast<Domain>(u));
    auto one = [&](const nlohmann::json& e) { return sp.at(e.is_string() ? e.get<std::string>() : e.dump()); };
    if (c.is_array()) {
      for (const auto& e : c) t.b[u].push_back(one(e));
    } else {
      t.b[u].push_back(one(c));
    }
    t.b[u] = normalized(t.b[u]);
    if (t.b[u].empty()) throw ParseError("empty coordinate for domain '" + name + "'");
  }
  return t;
}

ConsistencyResult is_consistent(const HierarchicalStructure& h, const Tuple& t, Length kappa) {
  ConsistencyResult r;
  const auto& I = h.index;
  const std::size_t n = h.domain_count();
  bool any = false;
  auto offer = [&](Length v, nlohmann::json w) {
    if (!any || v > r.worst) {
      r.worst = v;
      r.witness = std::move(w);
      any = true;
    }
  };
  for (std::size_t u = 0; u < n; ++u) {
    Length dm = set_diameter(h.space(static_cast<Domain>(u)), t.b[u]);
    if (dm > kappa) offer(dm, {{"diameter", dn(h, static_cast<Domain>(u))}});
  }
  for (std::size_t vi = 0; vi < n; ++vi)
    for (std::size_t wi = 0; wi < n; ++wi) {
      Domain V = static_cast<Domain>(vi), W = static_cast<Domain>(wi);
      if (I.transverse(V, W) && vi < wi) {
        Length a = h.du_sets(V, t.b[vi], h.rho(W, V));
        Length b = h.du_sets(W, t.b[wi], h.rho(V, W));
        offer(min(a, b), {{"transverse", {dn(h, V), dn(h, W)}}});
      } else if (I.proper_nested(V, W)) {
        Length a = h.du_sets(W, t.b[wi], h.rho(V, W));
        Length b = set_diameter(h.space(V), set_union(t.b[vi], h.rho_image(W, V, t.b[wi])));
        offer(min(a, b), {{"nested", {dn(h, V), dn(h, W)}}});
      }
    }
  r.consistent = !any || r.worst <= kappa;
  if (r.consistent) r.witness = nullptr;
  return r;
}

Realization realize(const HierarchicalStructure& h, const Tuple& t, Length kappa, const VertexSet* within) {
  const std::size_t n = h.domain_count();
  if (t.b.size() != n) throw std::invalid_argument("tuple size does not match the domain count");
  std::vector<DistRow> rows;
  for (std::size_t u = 0; u < n; ++u) {
    if (t.b[u].empty()) throw std::invalid_argument("empty tuple coordinate");
    rows.push_back(h.space(static_cast<Domain>(u)).row_to_set(t.b[u]));
  }
  Realization r;
  std::int64_t best = DistRow::kFar;
  auto consider = [&](Vertex x) {
    std::int64_t e = 0;
    for (std::size_t u = 0; u < n && e < best; ++u) e = std::max(e, row_min(rows[u], h.pi(static_cast<Domain>(u), x)));
    if (e < best) {
      best = e;
      r.point = x;
    }
  };
  if (within) {
    for (Vertex x : *within) consider(x);
  } else {
    for (std::size_t x = 0; x < h.ambient.size(); ++x) consider(static_cast<Vertex>(x));
  }
  if (r.point < 0) throw std::invalid_argument("realize: empty candidate set");
  if (best == DistRow::kFar) throw UnreachableError("realize: some coordinate is unreachable from every candidate");
  r.error = Length::from_ticks(best);
  std::int64_t k = kappa.ceil_units();
  r.theta = theta_at(h.constants.theta_realize, k);
  r.within_contract = r.theta && r.error <= *r.theta;
  return r;
}

nlohmann::json to_json(const HierarchicalStructure& h, const Realization& r) {
  nlohmann::json j{{"point", h.ambient.id(r.point)}, {"error", r.error}, {"within_contract", r.within_contract}};
  j["theta"] = r.theta ? nlohmann::json(*r.theta) : nlohmann::json(nullptr);
  return j;
}

std::size_t for_each_point_tuple(const HierarchicalStructure& h, const std::function<void(const Tuple&)>& f,
                                 std::size_t budget) {
  const std::size_t n = h.domain_count();
  double total = 1;
  for (std::size_t u = 0; u < n; ++u) total *= static_cast<double>(h.spaces[u].size());
  if (total > static_cast<double>(budget))
    throw BudgetError("tuple enumeration: " + std::to_string(static_cast<long double>(total)) + " tuples exceed the budget");
  Tuple t;
  t.b.assign(n, VertexSet{0});
  std::size_t count = 0;
  std::vector<Vertex> idx(n, 0);
  while (true) {
    for (std::size_t u = 0; u < n; ++u) t.b[u][0] = idx[u];
    f(t);
    ++count;
    std::size_t u = 0;
    for (; u < n; ++u) {
      if (static_cast<std::size_t>(++idx[u]) < h.spaces[u].size()) break;
      idx[u] = 0;
    }
    if (u == n) break;
  }
  return count;
}

HqcReport hqc_constant(const HierarchicalStructure& h, const VertexSet& Y) {
  HqcReport r;
  if (Y.empty()) throw std::invalid_argument("hqc_constant: empty set");
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    Domain U = static_cast<Domain>(u);
    const auto& sp = h.space(U);
    VertexSet img = projection_of_set(h, U, Y);
    Length k;
    if (h.hyperbolic[u]) {
      k = quasiconvexity_constant(sp, img);
    } else {
      DistRow row = sp.row_to_set(img);
      std::int64_t onto = 0;
      for (std::int64_t d : row) onto = std::max(onto, d);
      k = min(Length::from_ticks(onto), set_diameter(sp, img));
    }
    r.per_domain[h.index.name(U)] = k;
    r.k0 = max(r.k0, k);
  }
  return r;
}

Gate gate(const HierarchicalStructure& h, const VertexSet& Y, Vertex x) {
  if (Y.empty()) throw std::invalid_argument("gate: empty target set");
  Gate g;
  const std::size_t n = h.domain_count();
  g.target.b.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    Domain U = static_cast<Domain>(u);
    VertexSet img = projection_of_set(h, U, Y);
    DistRow row = h.space(U).row_to_set(h.pi(U, x));
    std::int64_t m = row_min(row, img);
    for (Vertex p : img)
      if (row[p] == m) g.target.b[u].push_back(p);
  }
  std::vector<DistRow> rows;
  for (std::size_t u = 0; u < n; ++u) rows.push_back(h.space(static_cast<Domain>(u)).row_to_set(g.target.b[u]));
  DistRow dx = h.ambient.row(x);
  std::int64_t best = DistRow::kFar, best_d = DistRow::kFar;
  for (Vertex y : Y) {
    std::int64_t e = 0;
    for (std::size_t u = 0; u < n && e <= best; ++u) e = std::max(e, row_min(rows[u], h.pi(static_cast<Domain>(u), y)));
    if (e < best || (e == best && dx[y] < best_d)) {
      best = e;
      best_d = dx[y];
      g.point = y;
    }
  }
  g.error = Length::from_ticks(best);
  return g;
}

ProductRegion product_region(const HierarchicalStructure& h, Domain U, std::optional<Length> alpha) {
  ProductRegion p;
  p.U = U;
  p.alpha = alpha ? *alpha : h.constants.alpha;
  const auto& I = h.index;
  const std::size_t n = h.domain_count();
  std::vector<Domain> above, orth, below;
  for (std::size_t v = 0; v < n; ++v) {
    Domain V = static_cast<Domain>(v);
    if (I.proper_nested(U, V) || I.transverse(U, V)) above.push_back(V);
    if (I.orthogonal(U, V)) orth.push_back(V);
    if (I.nested(V, U)) below.push_back(V);
  }
  std::vector<DistRow> rows;
  for (Domain V : above) rows.push_back(h.space(V).row_to_set(h.rho(U, V)));
  const std::int64_t a = p.alpha.ticks();
  for (std::size_t x = 0; x < h.ambient.size(); ++x) {
    bool in = true;
    for (std::size_t i = 0; i < above.size() && in; ++i) in = row_min(rows[i], h.pi(above[i], static_cast<Vertex>(x))) <= a;
    if (in) p.P.push_back(static_cast<Vertex>(x));
  }
  if (p.P.empty()) throw StructuralError("product region of '" + I.name(U) + "' is empty at alpha " + p.alpha.str());
  std::map<std::vector<VertexSet>, VertexSet> fk, ek;
  for (Vertex x : p.P) {
    std::vector<VertexSet> kf, ke;
    for (Domain V : orth) kf.push_back(h.pi(V, x));
    for (Domain V : below) ke.push_back(h.pi(V, x));
    fk[kf].push_back(x);
    ek[ke].push_back(x);
  }
  for (auto& [k, s] : fk) p.F_copies.push_back(s);
  for (auto& [k, s] : ek) p.E_copies.push_back(s);
  const auto& prov = h.parallel_copies[static_cast<std::size_t>(U)];
  if (!prov.empty()) {
    Length gap;
    for (const auto& f : p.F_copies) {
      std::optional<Length> b;
      for (const auto& c : prov) {
        if (c.empty()) continue;
        Length d = hausdorff(h.ambient, f, c);
        if (!b || d < *b) b = d;
      }
      if (b) gap = max(gap, *b);
    }
    p.provider_gap = gap;
  }
  return p;
}

nlohmann::json to_json(const HierarchicalStructure& h, const ProductRegion& p) {
  auto ids = [&](const VertexSet& s) {
    nlohmann::json a = nlohmann::json::array();
    for (Vertex v : s) a.push_back(h.ambient.id(v));
    return a;
  };
  nlohmann::json f = nlohmann::json::array(), e = nlohmann::json::array();
  for (const auto& s : p.F_copies) f.push_back(ids(s));
  for (const auto& s : p.E_copies) e.push_back(ids(s));
  nlohmann::json j{{"domain", h.index.name(p.U)}, {"alpha", p.alpha}, {"P", ids(p.P)}, {"F_copies", f}, {"E_copies", e}};
  j["provider_gap"] = p.provider_gap ? nlohmann::json(*p.provider_gap) : nlohmann::json(nullptr);
  return j;
}

CheckReport check_gate_formulas(const HierarchicalStructure& h, Domain U, const CheckOptions& opt) {
  CheckReport r;
  r.check = "gate_formulas";
  ProductRegion pr = product_region(h, U);
  r.bound = pr.alpha;
  const auto& I = h.index;
  const std::size_t n = h.domain_count();
  bool any = false;
  auto measure = [&](const char* target, const VertexSet& Y, Vertex x, Vertex anchor, bool f_factor) {
    Gate g = gate(h, Y, x);
    for (std::size_t v = 0; v < n; ++v) {
      Domain V = static_cast<Domain>(v);
      Length d;
      const char* bullet;
      if (I.proper_nested(U, V) || I.transverse(U, V)) {
        d = h.du_sets(V, h.pi(V, g.point), h.rho(U, V));
        bullet = "rho";
      } else if (std::string(target) == "P" || (f_factor && I.nested(V, U)) || (!f_factor && I.orthogonal(V, U))) {
        d = hausdorff(h.space(V), h.pi(V, g.point), h.pi(V, x));
        bullet = "preserved";
      } else {
        d = h.du(V, g.point, anchor);
        bullet = "anchored";
      }
      ++r.scanned;
      if (!any || d > r.observed) {
        r.observed = d;
        any = true;
        if (d > pr.alpha)
          r.witness = {{"target", target}, {"x", h.ambient.id(x)}, {"gate", h.ambient.id(g.point)}, {"V", dn(h, V)}, {"bullet", bullet}, {"value", d}};
      }
    }
  };
  std::vector<Vertex> xs;
  const std::size_t nx = h.ambient.size();
  if (nx <= opt.gate_points) {
    for (std::size_t x = 0; x < nx; ++x) xs.push_back(static_cast<Vertex>(x));
  } else {
    r.exhaustive = false;
    Rng rng(opt.seed);
    for (std::size_t i : rng.sample(nx, opt.gate_points)) xs.push_back(static_cast<Vertex>(i));
  }
  auto pick = [](const std::vector<VertexSet>& cs) {
    std::vector<std::size_t> idx;
    if (cs.empty()) return idx;
    idx.push_back(0);
    if (cs.size() > 2) idx.push_back(cs.size() / 2);
    if (cs.size() > 1) idx.push_back(cs.size() - 1);
    return idx;
  };
  for (Vertex x : xs) {
    measure("P", pr.P, x, x, true);
    for (std::size_t i : pick(pr.F_copies)) measure("F", pr.F_copies[i], x, pr.F_copies[i].front(), true);
    for (std::size_t i : pick(pr.E_copies)) measure("E", pr.E_copies[i], x, pr.E_copies[i].front(), false);
  }
  r.pass = r.observed <= pr.alpha;
  r.details["product_region_size"] = pr.P.size();
  r.details["F_copies"] = pr.F_copies.size();
  r.details["E_copies"] = pr.E_copies.size();
  if (r.pass) r.witness = nullptr;
  return r;
}

Length clipped_sum(const HierarchicalStructure& h, Vertex x, Vertex y, Length s) {
  Length sum;
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    Length d = h.du(static_cast<Domain>(u), x, y);
    if (d >= s) sum += d;
  }
  return sum;
}

DistanceFormulaFit distance_formula(const HierarchicalStructure& h, Length s, const DistanceFormulaOptions& opt) {
  if (s < Length::units(1)) throw std::invalid_argument("distance formula threshold must be at least 1");
  DistanceFormulaFit f;
  f.s = s;
  auto pairs = scan_pairs(h.ambient.size(), opt.check, f.exhaustive);
  f.pairs = pairs.size();
  // per pair, the domain distances once
  std::vector<std::vector<Length>> du(pairs.size());
  std::vector<Length> d(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [x, y] = pairs[i];
    d[i] = h.ambient.d(x, y);
    for (std::size_t u = 0; u < h.domain_count(); ++u) du[i].push_back(h.du(static_cast<Domain>(u), x, y));
  }
  auto fit_at = [&](Length thr) {
    std::vector<DistancePair> dp;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      Length sum;
      for (Length v : du[i])
        if (v >= thr) sum += v;
      dp.push_back({sum, d[i]});
    }
    if (dp.empty()) return std::make_pair(QiFit{}, std::size_t{0});
    QiFit q = qi_fit(dp);
    std::size_t bad = 0;
    for (const auto& p : dp)
      if (!qi_fit_holds(q, {p})) ++bad;
    return std::make_pair(q, bad);
  };
  auto [q, bad] = fit_at(s);
  f.K = q.lambda;
  f.C = q.epsilon;
  f.violations = bad;
  for (int k = 1; k <= opt.sweep_max; ++k) {
    auto [qk, bk] = fit_at(Length::units(k));
    f.sweep.emplace_back(Length::units(k), qk);
    if (!f.s0 && qk.lambda <= opt.k_cap) f.s0 = Length::units(k);
  }
  return f;
}

nlohmann::json to_json(const DistanceFormulaFit& f) {
  nlohmann::json sw = nlohmann::json::array();
  for (auto& [s, q] : f.sweep) sw.push_back({{"s", s}, {"K", q.lambda}, {"C", q.epsilon}});
  nlohmann::json j{{"s", f.s}, {"K", f.K}, {"C", f.C}, {"exhaustive", f.exhaustive}, {"pairs", f.pairs},
                   {"violations", f.violations}, {"sweep", sw}};
  j["s0"] = f.s0 ? nlohmann::json(*f.s0) : nlohmann::json(nullptr);
  return j;
}

bool unparameterized_quasigeodesic(const FiniteMetricGraph& g, const std::vector<VertexSet>& seq, Length D,
                                   std::vector<std::size_t>* breaks) {
  const std::size_t m = seq.size();
  if (m == 0) return true;
  const std::int64_t Dt = D.ticks();
  // reach[i]: farthest j with diam(seq[i..j]) ≤ D
  std::vector<std::size_t> reach(m);
  for (std::size_t i = 0; i < m; ++i) {
    VertexSet acc;
    std::int64_t diam = 0;
    std::size_t j = i;
    for (; j < m; ++j) {
      for (Vertex p : seq[j]) {
        DistRow row = g.row(p);
        for (Vertex q : acc) diam = std::max(diam, row[q]);
        for (Vertex q : seq[j]) diam = std::max(diam, row[q]);
      }
      if (diam > Dt) break;
      acc = set_union(acc, seq[j]);
    }
    if (j == i) return false;  // a single coordinate set is already too wide
    reach[i] = j - 1;
  }
  // fewest segments from 0 to m-1; among equals prefer the later breakpoint
  const std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> cost(m, kInf), prev(m, kInf);
  cost[0] = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (cost[i] == kInf) continue;
    for (std::size_t j = i + 1; j <= reach[i]; ++j)
      if (cost[i] + 1 < cost[j] || (cost[i] + 1 == cost[j] && i > prev[j])) {
        cost[j] = cost[i] + 1;
        prev[j] = i;
      }
  }
  std::vector<std::size_t> br;
  if (m == 1) {
    br = {0};
  } else {
    if (cost[m - 1] == kInf) return false;
    for (std::size_t j = m - 1; j != kInf; j = prev[j]) br.push_back(j);
    std::reverse(br.begin(), br.end());
  }
  if (breaks) *breaks = br;
  for (std::size_t a = 0; a < br.size(); ++a)
    for (std::size_t b = a + 1; b < br.size(); ++b) {
      Length d = set_distance(g, seq[br[a]], seq[br[b]]);
      Length k = Length::units(static_cast<std::int64_t>(b - a));
      if (d.times(D) + D.times(D) < k) return false;  // d < (b-a)/D - D
    }
  return true;
}

PathVerdict verify_hierarchy_path(const HierarchicalStructure& h, const std::vector<Vertex>& path, Length D) {
  PathVerdict v;
  if (path.empty()) {
    v.ok = false;
    v.reason = "empty path";
    return v;
  }
  const auto& X = h.ambient;
  std::vector<Length> t(path.size());
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto w = X.dist(path[i - 1], path[i]);
    bool edge = false;
    for (const Arc& a : X.neighbors(path[i - 1]))
      if (a.to == path[i]) edge = true;
    if (!edge) {
      v.ok = false;
      v.reason = "consecutive vertices " + X.id(path[i - 1]) + ", " + X.id(path[i]) + " are not adjacent";
      return v;
    }
    t[i] = t[i - 1] + *w;
  }
  for (std::size_t i = 0; i < path.size(); ++i) {
    DistRow row = X.row(path[i]);
    for (std::size_t j = i + 1; j < path.size(); ++j) {
      Length d = Length::from_ticks(row[path[j]]);
      Length dt = t[j] - t[i];
      if (d > dt.times(D) + D || d.times(D) + D.times(D) < dt) {
        v.ok = false;
        v.reason = "ambient quasigeodesic bound fails between positions " + std::to_string(i) + " and " + std::to_string(j);
        return v;
      }
    }
  }
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    Domain U = static_cast<Domain>(u);
    std::vector<VertexSet> seq;
    for (Vertex p : path) seq.push_back(h.pi(U, p));
    std::vector<std::size_t> br;
    bool ok = unparameterized_quasigeodesic(h.space(U), seq, D, &br);
    v.breakpoints[h.index.name(U)] = br;
    if (!ok && v.ok) {
      v.ok = false;
      v.worst_domain = U;
      v.reason = "projection to " + h.index.name(U) + " is not an unparameterized quasigeodesic";
    }
  }
  return v;
}

PathSearch find_hierarchy_path(const HierarchicalStructure& h, Vertex x, Vertex y, Length D, std::size_t budget) {
  PathSearch s;
  const auto& X = h.ambient;
  if (!X.dist(x, y)) throw UnreachableError("find_hierarchy_path: endpoints are in different components");
  auto path = geodesic(X, x, y);
  ++s.candidates;
  if (verify_hierarchy_path(h, path, D).ok) {
    s.path = path;
    s.method = "geodesic";
    return s;
  }
  // keep vertices whose projections stay D-close to a geodesic between the endpoint projections
  std::vector<VertexSet> corridor(h.domain_count());
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    const auto& sp = h.space(static_cast<Domain>(u));
    VertexSet c;
    for (Vertex p : h.pi(static_cast<Domain>(u), x))
      for (Vertex q : h.pi(static_cast<Domain>(u), y)) {
        auto iv = interval(sp, p, q);
        c.insert(c.end(), iv.begin(), iv.end());
      }
    corridor[u] = normalized(std::move(c));
  }
  VertexSet keep;
  for (std::size_t z = 0; z < X.size(); ++z) {
    bool ok = true;
    for (std::size_t u = 0; u < h.domain_count() && ok; ++u)
      ok = h.du_sets(static_cast<Domain>(u), h.pi(static_cast<Domain>(u), static_cast<Vertex>(z)), corridor[u]) <= D;
    if (ok) keep.push_back(static_cast<Vertex>(z));
  }
  if (contains(keep, x) && contains(keep, y)) {
    auto sub = induced_subgraph(X, keep);
    Vertex sx = sub.at(X.id(x)), sy = sub.at(X.id(y));
    if (sub.dist(sx, sy)) {
      std::vector<Vertex> p;
      for (Vertex v : geodesic(sub, sx, sy)) p.push_back(X.at(sub.id(v)));
      ++s.candidates;
      if (verify_hierarchy_path(h, p, D).ok) {
        s.path = p;
        s.method = "pruned";
        return s;
      }
    }
  }
  // exhaustive: every ambient geodesic, then paths up to D times longer, by DFS with a budget
  DistRow to_y = X.row(y);
  const std::int64_t dxy = to_y[x];
  for (std::int64_t slack : {std::int64_t{0}, dxy * (D.ticks() - Length::kScale) / Length::kScale + D.ticks()}) {
    std::vector<Vertex> cur{x};
    std::function<bool(std::int64_t)> dfs = [&](std::int64_t used) -> bool {
      if (s.candidates >= budget) return false;
      Vertex v = cur.back();
      if (v == y) {
        ++s.candidates;
        if (verify_hierarchy_path(h, cur, D).ok) {
          s.path = cur;
          return true;
        }
        return false;
      }
      for (const Arc& a : X.neighbors(v)) {
        if (used + a.w + to_y[a.to] > dxy + slack) continue;
        if (std::find(cur.begin(), cur.end(), a.to) != cur.end()) continue;
        cur.push_back(a.to);
        if (dfs(used + a.w)) return true;
        cur.pop_back();
      }
      return false;
    };
    if (dfs(0)) {
      s.method = "exhaustive";
      return s;
    }
  }
  s.method = s.candidates >= budget ? "budget exhausted" : "exhaustive";
  return s;
}

}  // namespace hhs
