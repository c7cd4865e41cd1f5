#include "hhs/cusped.hpp"

#include <algorithm>
#include <queue>

#include "hhs/errors.hpp"
#include "hhs/free_group.hpp"

namespace hhs {

namespace {

constexpr double kEdgeBudget = 2e7;

std::int64_t unit_ticks() { return Length::units(1).ticks(); }

void check_vertices(std::size_t n, const char* what) {
  if (n > vertex_budget())
    throw BudgetError(std::string(what) + ": " + std::to_string(n) + " vertices exceed the budget of " + std::to_string(vertex_budget()));
}

// Distances among the members in ticks, row-major.
std::vector<std::int64_t> member_table(const FiniteMetricGraph& g, const std::vector<Vertex>& members) {
  const std::size_t m = members.size();
  std::vector<std::int64_t> t(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    DistRow row = g.row(members[i]);
    for (std::size_t j = 0; j < m; ++j) {
      if (!row.reachable(members[j])) throw StructuralError("cusped: base is not connected");
      t[i * m + j] = row[members[j]];
    }
  }
  return t;
}

std::int64_t threshold(int k) { return (k >= 40 ? (std::int64_t{1} << 40) : (std::int64_t{1} << k)) * unit_ticks(); }

double edge_estimate(const std::vector<std::int64_t>& t, std::size_t m, int lo, int hi) {
  double e = 0;
  for (int k = lo; k <= hi; ++k) {
    std::int64_t th = threshold(k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (t[i * m + j] > 0 && t[i * m + j] <= th) ++e;
  }
  return e;
}

// Horizontal edges at levels lo..hi; vert[k][i] is the builder vertex of member i at level k.
void add_horizontal(GraphBuilder& b, const std::vector<std::vector<Vertex>>& vert, const std::vector<std::int64_t>& t,
                    int lo, int hi) {
  const std::size_t m = vert.empty() ? 0 : vert[0].size();
  for (int k = lo; k <= hi; ++k) {
    std::int64_t th = threshold(k);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j)
        if (t[i * m + j] > 0 && t[i * m + j] <= th) b.add_edge(vert[static_cast<std::size_t>(k)][i], vert[static_cast<std::size_t>(k)][j]);
  }
}

CuspedGraph build_levels(const FiniteMetricGraph& base, int depth, std::optional<int> radius) {
  if (!base.connected()) throw StructuralError("cusped: base graph is not connected");
  const std::size_t n = base.size();
  check_vertices(n * static_cast<std::size_t>(depth + 1) + (radius ? 1 : 0), "horoball");
  std::vector<Vertex> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<Vertex>(i);
  auto t = member_table(base, all);
  if (edge_estimate(t, n, 0, depth) > kEdgeBudget) throw BudgetError("horoball: too many horizontal edges");
  CuspedGraph c;
  c.base = base;
  c.depth = depth;
  c.radius = radius;
  GraphBuilder b;
  std::vector<std::vector<Vertex>> vert(static_cast<std::size_t>(depth + 1), std::vector<Vertex>(n));
  for (int k = 0; k <= depth; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      std::string id = k == 0 ? base.id(static_cast<Vertex>(i)) : base.id(static_cast<Vertex>(i)) + "@" + std::to_string(k);
      Vertex v = b.add_vertex(id);
      b.set_label(v, "level:" + std::to_string(k));
      vert[static_cast<std::size_t>(k)][i] = v;
      c.level.push_back(k);
      c.base_of.push_back(static_cast<Vertex>(i));
    }
  for (int k = 0; k < depth; ++k)
    for (std::size_t i = 0; i < n; ++i) b.add_edge(vert[static_cast<std::size_t>(k)][i], vert[static_cast<std::size_t>(k + 1)][i]);
  add_horizontal(b, vert, t, 0, depth);
  if (radius) {
    Vertex a = b.add_vertex("apex");
    b.set_label(a, "apex");
    for (std::size_t i = 0; i < n; ++i) b.add_edge(a, vert[static_cast<std::size_t>(*radius)][i]);
    c.apex = a;
    c.level.push_back(-1);
    c.base_of.push_back(-1);
  }
  c.graph = b.build();
  return c;
}

// Nearest sources by label: distances and, per vertex, the bitset of nearest sources.
struct Labelled {
  std::vector<std::int64_t> d;
  std::vector<std::uint64_t> mask;
  std::size_t words = 0;
};

Labelled labelled_search(const FiniteMetricGraph& g, const std::vector<Vertex>& sources, const std::vector<char>& blocked) {
  const std::size_t n = g.size();
  Labelled L;
  L.words = (sources.size() + 63) / 64;
  L.d.assign(n, DistRow::kFar);
  L.mask.assign(n * L.words, 0);
  using Item = std::pair<std::int64_t, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    auto s = static_cast<std::size_t>(sources[i]);
    L.d[s] = 0;
    L.mask[s * L.words + i / 64] |= std::uint64_t{1} << (i % 64);
    pq.emplace(0, sources[i]);
  }
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du != L.d[static_cast<std::size_t>(u)]) continue;
    for (const Arc& a : g.neighbors(u)) {
      auto v = static_cast<std::size_t>(a.to);
      if (blocked[v]) continue;
      std::int64_t nd = du + a.w;
      if (nd > L.d[v]) continue;
      if (nd < L.d[v]) {
        L.d[v] = nd;
        std::fill_n(L.mask.begin() + static_cast<std::ptrdiff_t>(v * L.words), L.words, 0);
        pq.emplace(nd, a.to);
      }
      for (std::size_t w = 0; w < L.words; ++w) L.mask[v * L.words + w] |= L.mask[static_cast<std::size_t>(u) * L.words + w];
    }
  }
  return L;
}

}  // namespace

int default_horoball_depth(const FiniteMetricGraph& base) {
  std::int64_t d = std::max<std::int64_t>(1, diameter(base).ceil_units());
  int k = 0;
  while ((std::int64_t{1} << k) < d) ++k;
  return k + 2;
}

CuspedGraph horoball(const FiniteMetricGraph& base, int depth) {
  if (base.size() == 0) throw std::invalid_argument("horoball: empty base");
  return build_levels(base, depth < 0 ? default_horoball_depth(base) : depth, std::nullopt);
}

CuspedGraph hyperbolic_cone(const FiniteMetricGraph& base, int r) {
  if (r < 1) throw std::invalid_argument("hyperbolic_cone: radius must be at least 1");
  if (base.size() == 0) throw std::invalid_argument("hyperbolic_cone: empty base");
  return build_levels(base, r, r);
}

nlohmann::json to_json(const CuspedGraph& c) {
  nlohmann::json j = graph_to_json(c.graph);
  j["depth"] = c.depth;
  if (c.radius) j["radius"] = *c.radius;
  if (c.apex) j["apex"] = c.graph.id(*c.apex);
  return j;
}

std::optional<Vertex> PyramidSpace::lift(Vertex u, int k) const {
  if (u < 0 || static_cast<std::size_t>(u) >= base.size() || k < 0 || k > r) return std::nullopt;
  if (k == 0) return u;
  Vertex v = lift_[static_cast<std::size_t>(u) * static_cast<std::size_t>(r) + static_cast<std::size_t>(k - 1)];
  if (v < 0) return std::nullopt;
  return v;
}

VertexSet PyramidSpace::cone(std::size_t c) const {
  VertexSet out;
  for (Vertex u : cosets.at(c))
    for (int k = 0; k <= r; ++k) out.push_back(*lift(u, k));
  out.push_back(apex[c]);
  return normalized(out);
}

PyramidSpace pyramid(const FiniteMetricGraph& base, const std::vector<ConeBase>& cosets, int r) {
  if (r < 1) throw StructuralError("pyramid: radius must be at least 1");
  const std::size_t n = base.size();
  PyramidSpace p;
  p.base = base;
  p.r = r;
  p.coset_of.assign(n, -1);
  p.lift_.assign(n * static_cast<std::size_t>(r), -1);
  std::size_t total = n;
  for (std::size_t c = 0; c < cosets.size(); ++c) {
    const auto& cb = cosets[c];
    if (cb.members.empty()) throw StructuralError("pyramid: empty coset");
    if (cb.metric.size() != 0 && cb.metric.size() != cb.members.size()) throw StructuralError("pyramid: coset metric size mismatch");
    for (Vertex u : cb.members) {
      if (u < 0 || static_cast<std::size_t>(u) >= n) throw std::out_of_range("pyramid: coset member outside the base");
      if (p.coset_of[static_cast<std::size_t>(u)] >= 0)
        throw StructuralError("pyramid: cosets overlap at '" + base.id(u) + "'");
      p.coset_of[static_cast<std::size_t>(u)] = static_cast<int>(c);
    }
    total += cb.members.size() * static_cast<std::size_t>(r) + 1;
  }
  check_vertices(total, "pyramid");
  GraphBuilder b;
  for (std::size_t v = 0; v < n; ++v) {
    b.add_vertex(base.id(static_cast<Vertex>(v)));
    p.level.push_back(0);
    p.base_of.push_back(static_cast<Vertex>(v));
  }
  for (std::size_t v = 0; v < n; ++v)
    for (const Arc& a : base.neighbors(static_cast<Vertex>(v)))
      if (static_cast<std::size_t>(a.to) > v) b.add_edge(static_cast<Vertex>(v), a.to, Length::from_ticks(a.w));
  double edges = 0;
  std::vector<std::vector<std::int64_t>> tables;
  for (const auto& cb : cosets) {
    tables.push_back(cb.metric.size() ? member_table(cb.metric, [&] {
      std::vector<Vertex> all(cb.members.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Vertex>(i);
      return all;
    }())
                                      : member_table(base, cb.members));
    edges += edge_estimate(tables.back(), cb.members.size(), 0, r);
  }
  if (edges > kEdgeBudget) throw BudgetError("pyramid: too many horizontal edges");
  for (std::size_t c = 0; c < cosets.size(); ++c) {
    const auto& cb = cosets[c];
    const std::size_t m = cb.members.size();
    std::vector<std::vector<Vertex>> vert(static_cast<std::size_t>(r + 1), std::vector<Vertex>(m));
    for (std::size_t i = 0; i < m; ++i) vert[0][i] = cb.members[i];
    for (int k = 1; k <= r; ++k)
      for (std::size_t i = 0; i < m; ++i) {
        Vertex u = cb.members[i];
        Vertex v = b.add_vertex(base.id(u) + "@" + std::to_string(k));
        b.set_label(v, "level:" + std::to_string(k));
        vert[static_cast<std::size_t>(k)][i] = v;
        p.lift_[static_cast<std::size_t>(u) * static_cast<std::size_t>(r) + static_cast<std::size_t>(k - 1)] = v;
        p.level.push_back(k);
        p.base_of.push_back(u);
        p.coset_of.push_back(static_cast<int>(c));
        b.add_edge(vert[static_cast<std::size_t>(k - 1)][i], v);
      }
    add_horizontal(b, vert, tables[c], 0, r);
    VertexSet sorted = normalized(cb.members);
    p.names.push_back(base.id(sorted.front()));
    Vertex a = b.add_vertex("apex:" + p.names.back());
    b.set_label(a, "apex");
    for (std::size_t i = 0; i < m; ++i) b.add_edge(a, vert[static_cast<std::size_t>(r)][i]);
    p.apex.push_back(a);
    p.level.push_back(-1);
    p.base_of.push_back(-1);
    p.coset_of.push_back(static_cast<int>(c));
    p.cosets.push_back(std::move(sorted));
  }
  p.graph = b.build();
  if (p.apex.size() >= 2) {
    std::vector<char> none(p.graph.size(), 0);
    // labelled by nearest apex; the least label change along an edge is the least pairwise distance
    std::vector<std::int64_t> d(p.graph.size(), DistRow::kFar);
    std::vector<int> lab(p.graph.size(), -1);
    using Item = std::pair<std::int64_t, Vertex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t c = 0; c < p.apex.size(); ++c) {
      d[static_cast<std::size_t>(p.apex[c])] = 0;
      lab[static_cast<std::size_t>(p.apex[c])] = static_cast<int>(c);
      pq.emplace(0, p.apex[c]);
    }
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != d[static_cast<std::size_t>(u)]) continue;
      for (const Arc& a : p.graph.neighbors(u))
        if (du + a.w < d[static_cast<std::size_t>(a.to)]) {
          d[static_cast<std::size_t>(a.to)] = du + a.w;
          lab[static_cast<std::size_t>(a.to)] = lab[static_cast<std::size_t>(u)];
          pq.emplace(du + a.w, a.to);
        }
    }
    std::int64_t best = DistRow::kFar;
    for (std::size_t u = 0; u < p.graph.size(); ++u)
      for (const Arc& a : p.graph.neighbors(static_cast<Vertex>(u))) {
        auto v = static_cast<std::size_t>(a.to);
        if (lab[u] >= 0 && lab[v] >= 0 && lab[u] != lab[v]) best = std::min(best, d[u] + a.w + d[v]);
      }
    if (best != DistRow::kFar) p.apex_separation = Length::from_ticks(best);
  }
  return p;
}

PyramidSpace pyramid_over(const FreeBall& ball, int r) {
  std::vector<ConeBase> cs;
  for (const auto& c : ball.cosets) cs.push_back({c.members, c.graph});
  return pyramid(ball.graph, cs, r);
}

nlohmann::json to_json(const PyramidSpace& p, bool with_graph) {
  nlohmann::json cos = nlohmann::json::array();
  for (std::size_t c = 0; c < p.cosets.size(); ++c)
    cos.push_back({{"apex", p.graph.id(p.apex[c])}, {"size", p.cosets[c].size()}});
  nlohmann::json j{{"r", p.r}, {"base_size", p.base_size()}, {"size", p.graph.size()}, {"edges", p.graph.edge_count()},
                   {"cosets", cos}, {"apex_separation", p.apex_separation}};
  if (with_graph) j["graph"] = graph_to_json(p.graph);
  return j;
}

Length cone_quasiconvexity(const PyramidSpace& p, std::size_t coset) {
  return quasiconvexity_constant(p.graph, p.cone(coset));
}

HullCheck quasiconvex_hull_check(const FiniteMetricGraph& g, const std::vector<Vertex>& geodesic,
                                 const std::vector<VertexSet>& family, Length Q, Length delta) {
  HullCheck hc;
  hc.bound = Q + delta + delta;
  VertexSet H = normalized(geodesic);
  const VertexSet path = H;
  for (const auto& m : family)
    if (!set_intersection(m, path).empty()) {
      H = set_union(H, m);
      ++hc.members_met;
    }
  auto q = is_quasiconvex(g, H, hc.bound);
  hc.ok = q.ok;
  hc.observed = q.worst;
  return hc;
}

VertexSet entry_points(const PyramidSpace& p, Vertex x, std::size_t c) {
  if (c >= p.cosets.size()) throw std::out_of_range("entry_points: no such coset");
  if (p.coset_of[static_cast<std::size_t>(x)] == static_cast<int>(c)) {
    if (p.level[static_cast<std::size_t>(x)] == 0) return {x};
    return p.cosets[c];
  }
  const Vertex apex = p.apex[c];
  DistRow dx = p.graph.row(x), da = p.graph.row(apex);
  const std::int64_t total = dx[apex];
  std::vector<Vertex> I;
  for (std::size_t z = 0; z < p.graph.size(); ++z)
    if (dx.reachable(static_cast<Vertex>(z)) && dx[static_cast<Vertex>(z)] + da[static_cast<Vertex>(z)] == total) I.push_back(static_cast<Vertex>(z));
  std::sort(I.begin(), I.end(), [&](Vertex a, Vertex b) { return dx[a] != dx[b] ? dx[a] < dx[b] : a < b; });
  std::vector<char> inI(p.graph.size(), 0), clean(p.graph.size(), 0);
  for (Vertex z : I) inI[static_cast<std::size_t>(z)] = 1;
  auto in_cone = [&](Vertex z) { return p.coset_of[static_cast<std::size_t>(z)] == static_cast<int>(c); };
  clean[static_cast<std::size_t>(x)] = 1;
  VertexSet out;
  for (Vertex z : I) {
    if (z == x) continue;
    bool reach = false;
    for (const Arc& a : p.graph.neighbors(z)) {
      auto w = static_cast<std::size_t>(a.to);
      if (inI[w] && clean[w] && !in_cone(a.to) && dx[a.to] + a.w == dx[z]) {
        reach = true;
        break;
      }
    }
    if (!reach) continue;
    if (in_cone(z))
      out.push_back(z);
    else
      clean[static_cast<std::size_t>(z)] = 1;
  }
  return normalized(out);
}

std::vector<VertexSet> all_entry_points(const PyramidSpace& p, std::size_t c) {
  if (c >= p.cosets.size()) throw std::out_of_range("all_entry_points: no such coset");
  const std::size_t N = p.graph.size();
  std::vector<char> blocked(N, 0);
  for (std::size_t v = 0; v < N; ++v)
    if (p.coset_of[v] == static_cast<int>(c) && p.level[v] != 0) blocked[v] = 1;
  const VertexSet& mem = p.cosets[c];
  auto L = labelled_search(p.graph, mem, blocked);
  std::vector<VertexSet> out(N);
  for (std::size_t v = 0; v < N; ++v) {
    if (blocked[v]) {
      out[v] = mem;
      continue;
    }
    if (p.coset_of[v] == static_cast<int>(c)) {
      out[v] = {static_cast<Vertex>(v)};
      continue;
    }
    for (std::size_t i = 0; i < mem.size(); ++i)
      if (L.mask[v * L.words + i / 64] >> (i % 64) & 1) out[v].push_back(mem[i]);
  }
  return out;
}

PushOff push_off(const PyramidSpace& p, const std::vector<Vertex>& g) {
  if (g.empty()) throw std::invalid_argument("push_off: empty path");
  if (!p.in_base(g.front()) || !p.in_base(g.back())) throw std::invalid_argument("push_off: endpoints must lie in the base");
  PushOff po;
  po.path.push_back(g.front());
  for (std::size_t i = 1; i < g.size();) {
    if (p.in_base(g[i])) {
      po.path.push_back(g[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (!p.in_base(g[j])) ++j;
    auto seg = geodesic(p.base, g[i - 1], g[j]);
    po.path.insert(po.path.end(), seg.begin() + 1, seg.end());
    ++po.replaced;
    i = j + 1;
  }
  const auto& P = po.path;
  std::vector<std::int64_t> arc{0};
  for (std::size_t i = 1; i < P.size(); ++i) arc.push_back(arc.back() + p.base.dt(P[i - 1], P[i]));
  std::vector<DistancePair> dp;
  for (std::size_t i = 0; i < P.size(); ++i) {
    DistRow row = p.base.row(P[i]);
    for (std::size_t j = i + 1; j < P.size(); ++j) dp.push_back({Length::from_ticks(arc[j] - arc[i]), Length::from_ticks(row[P[j]])});
  }
  if (!dp.empty()) po.fit = qi_fit(dp);
  po.hausdorff = hausdorff(p.base, normalized(P), normalized(geodesic(p.base, P.front(), P.back())));
  return po;
}

HierarchicalStructure aux_structure(const HierarchicalStructure& base, const std::vector<ConeBase>& cosets, int r,
                                    const CheckOptions& opt) {
  if (base.domain_count() != 1) throw StructuralError("aux_structure: the base must have a single domain");
  const FiniteMetricGraph& CS = base.space(0);
  PyramidSpace P = pyramid(CS, cosets, r);
  const std::size_t nc = P.cosets.size();
  const std::size_t nx = base.ambient.size();
  HierarchicalStructure h;
  h.name = base.name + "/aux";
  h.ambient = base.ambient;
  std::vector<std::string> names{"S"};
  for (const auto& s : P.names) names.push_back("H:" + s);
  h.index = DomainIndex(names);
  for (std::size_t c = 0; c < nc; ++c) h.index.set_nested(static_cast<Domain>(c + 1), 0);
  h.spaces.push_back(P.graph);
  // local index of each base vertex inside its coset's space
  std::vector<std::vector<Vertex>> order(nc);
  std::vector<int> local(CS.size(), -1);
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& cb = cosets[c];
    FiniteMetricGraph g = cb.metric;
    if (g.size() == 0) {
      GraphBuilder b;
      for (Vertex u : cb.members) b.add_vertex(CS.id(u));
      for (std::size_t i = 0; i < cb.members.size(); ++i) {
        DistRow row = CS.row(cb.members[i]);
        for (std::size_t j = i + 1; j < cb.members.size(); ++j)
          b.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(j), Length::from_ticks(row[cb.members[j]]));
      }
      g = b.build();
    }
    for (std::size_t i = 0; i < cb.members.size(); ++i) local[static_cast<std::size_t>(cb.members[i])] = static_cast<int>(i);
    h.spaces.push_back(g);
  }
  h.hyperbolic.assign(nc + 1, 1);
  auto to_local = [&](const VertexSet& s) {
    VertexSet out;
    for (Vertex v : s) out.push_back(local[static_cast<std::size_t>(v)]);
    return normalized(out);
  };
  h.proj.assign(nc + 1, std::vector<VertexSet>(nx));
  for (std::size_t x = 0; x < nx; ++x) h.proj[0][x] = base.pi(0, static_cast<Vertex>(x));
  for (std::size_t c = 0; c < nc; ++c) {
    auto E = all_entry_points(P, c);
    const Domain U = static_cast<Domain>(c + 1);
    for (std::size_t x = 0; x < nx; ++x) {
      VertexSet s;
      for (Vertex v : h.proj[0][x]) s = set_union(s, E[static_cast<std::size_t>(v)]);
      h.proj[static_cast<std::size_t>(U)][x] = to_local(s);
    }
    h.rho_set[{U, 0}] = {P.apex[c]};
    auto& rm = h.rho_map[{0, U}];
    rm.resize(P.graph.size());
    for (std::size_t v = 0; v < P.graph.size(); ++v) rm[v] = to_local(E[v]);
    for (std::size_t d = 0; d < nc; ++d) {
      if (d == c) continue;
      VertexSet s;
      for (Vertex u : P.cosets[d]) s = set_union(s, E[static_cast<std::size_t>(u)]);
      h.rho_set[{static_cast<Domain>(d + 1), U}] = to_local(s);
    }
  }
  h.parallel_copies.assign(nc + 1, {});
  h.parallel_copies[0] = {all_vertices(h.ambient)};
  for (std::size_t c = 0; c < nc; ++c) {
    VertexSet copy;
    for (std::size_t x = 0; x < nx; ++x) {
      const auto& s = h.proj[0][x];
      if (!s.empty() && std::all_of(s.begin(), s.end(), [&](Vertex v) { return P.coset_of[static_cast<std::size_t>(v)] == static_cast<int>(c); }))
        copy.push_back(static_cast<Vertex>(x));
    }
    if (!copy.empty()) h.parallel_copies[c + 1] = {copy};
  }
  nlohmann::json cn = nlohmann::json::array();
  for (const auto& s : P.names) cn.push_back(s);
  h.meta = {{"kind", "aux"}, {"r", r}, {"cosets", cn}, {"source", base.meta}};
  h.constants.complexity = h.index.longest_chain();
  for (std::int64_t k = 0; k <= 32; ++k) h.constants.theta_realize[k] = Length::units(2 * k + 2);
  h.constants = calibrate_constants(h, opt);
  return h;
}

}  // namespace hhs
