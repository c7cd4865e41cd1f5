#include "hhs/rotating.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "hhs/errors.hpp"
#include "hhs/free_group.hpp"

namespace hhs {

namespace {

std::int64_t avoiding_distance(const FiniteMetricGraph& g, Vertex s, Vertex t, const std::vector<char>& blocked) {
  std::vector<std::int64_t> d(g.size(), DistRow::kFar);
  using Item = std::pair<std::int64_t, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[static_cast<std::size_t>(s)] = 0;
  pq.emplace(0, s);
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du != d[static_cast<std::size_t>(u)]) continue;
    if (u == t) return du;
    for (const Arc& a : g.neighbors(u)) {
      if (blocked[static_cast<std::size_t>(a.to)]) continue;
      if (du + a.w < d[static_cast<std::size_t>(a.to)]) {
        d[static_cast<std::size_t>(a.to)] = du + a.w;
        pq.emplace(du + a.w, a.to);
      }
    }
  }
  return DistRow::kFar;
}

int word_radius(const RotatingContext& ctx, Vertex v) {
  const auto& P = ctx.P;
  if (P.level[static_cast<std::size_t>(v)] < 0) return static_cast<int>(ctx.rep[static_cast<std::size_t>(P.coset_of[static_cast<std::size_t>(v)])].size());
  return static_cast<int>(ctx.ball.words[static_cast<std::size_t>(P.base_of[static_cast<std::size_t>(v)])].size());
}

struct UnionFind {
  std::vector<Vertex> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  Vertex find(Vertex v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  }
  bool unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

}  // namespace

RotatingContext rotating_context(const FreeBall& ball, int r, const std::vector<std::string>& N, const RotatingOptions& opt) {
  RotatingContext ctx;
  ctx.ball = ball;
  ctx.P = pyramid_over(ball, r);
  std::set<std::string> n;
  for (const auto& w : N) {
    if (!fg::valid_word(fg::word_of(w), ball.spec.rank)) throw ParseError("rotating: '" + w + "' is not a word in the generators");
    std::string x = fg::reduce(fg::word_of(w));
    if (x.empty()) continue;
    n.insert(x);
    n.insert(fg::inverse(x));
  }
  ctx.N.assign(n.begin(), n.end());
  ctx.opt = opt;
  if (!ctx.opt.apex_radius) ctx.opt.apex_radius = Length::units(r + 1);
  if (!(opt.w1 <= opt.w2)) throw std::invalid_argument("rotating: window must satisfy w1 ≤ w2");
  for (const auto& c : ctx.P.cosets) ctx.rep.push_back(ball.words[static_cast<std::size_t>(c.front())]);
  return ctx;
}

std::optional<Vertex> act(const RotatingContext& ctx, const std::string& h, Vertex z) {
  const auto& P = ctx.P;
  const int lv = P.level[static_cast<std::size_t>(z)];
  if (lv < 0) {
    auto u = act(ctx, h, P.cosets[static_cast<std::size_t>(P.coset_of[static_cast<std::size_t>(z)])].front());
    if (!u) return std::nullopt;
    int c = P.coset_of[static_cast<std::size_t>(*u)];
    if (c < 0) return std::nullopt;
    return P.apex[static_cast<std::size_t>(c)];
  }
  Vertex b = P.base_of[static_cast<std::size_t>(z)];
  auto y = ctx.ball.find(fg::multiply(h, ctx.ball.words[static_cast<std::size_t>(b)]));
  if (!y) return std::nullopt;
  return P.lift(*y, lv);
}

std::vector<FulcrumWitness> detect_fulcrum(const RotatingContext& ctx, Vertex x, Vertex y, Length d) {
  std::vector<FulcrumWitness> out;
  if (x == y) return out;
  const auto& P = ctx.P;
  const auto& G = P.graph;
  DistRow dx = G.row(x), dy = G.row(y);
  const std::int64_t total = dx[y];
  const std::int64_t lo = ctx.opt.w1.ticks(), hi = ctx.opt.w2.ticks();
  for (std::size_t c = 0; c < P.cosets.size(); ++c) {
    const Vertex v = P.apex[c];
    if (dx[v] + dy[v] != total) continue;
    DistRow dv = G.row(v);
    std::vector<Vertex> X, Y;
    for (Vertex z : P.cone(c)) {
      if (dv[z] < lo || dv[z] > hi) continue;
      if (dx[z] + dv[z] == dx[v]) X.push_back(z);
      if (dy[z] + dv[z] == dy[v]) Y.push_back(z);
    }
    if (X.empty() || Y.empty()) continue;
    const std::string& g = ctx.rep[c];
    std::vector<std::string> hs;
    for (const auto& n : ctx.N) hs.push_back(fg::conjugate(g, n));
    for (Vertex xp : X) {
      DistRow dxp = G.row(xp);
      for (Vertex yp : Y)
        for (const auto& h : hs) {
          auto hy = act(ctx, h, yp);
          if (!hy) continue;
          Length def = Length::from_ticks(dxp[*hy]);
          if (def <= d) out.push_back({c, v, xp, yp, h, def});
        }
    }
  }
  return out;
}

bool validate_fulcrum(const RotatingContext& ctx, Vertex x, Vertex y, const FulcrumWitness& w, Length d) {
  const auto& P = ctx.P;
  const auto& G = P.graph;
  if (w.coset >= P.cosets.size() || P.apex[w.coset] != w.apex) return false;
  if (G.dt(x, w.apex) + G.dt(w.apex, y) != G.dt(x, y)) return false;
  if (G.dt(x, w.xp) + G.dt(w.xp, w.apex) != G.dt(x, w.apex)) return false;
  if (G.dt(w.apex, w.yp) + G.dt(w.yp, y) != G.dt(w.apex, y)) return false;
  for (Vertex p : {w.xp, w.yp})
    if (G.d(p, w.apex) < ctx.opt.w1 || G.d(p, w.apex) > ctx.opt.w2) return false;
  std::string core = fg::multiply(fg::multiply(fg::inverse(ctx.rep[w.coset]), w.h), ctx.rep[w.coset]);
  if (!std::binary_search(ctx.N.begin(), ctx.N.end(), core)) return false;
  auto hy = act(ctx, w.h, w.yp);
  return hy && G.d(w.xp, *hy) == w.defect && w.defect <= d;
}

bool is_linked(const RotatingContext& ctx, Vertex p, Vertex q) { return detect_fulcrum(ctx, p, q, ctx.opt.d_strong).empty(); }

bool is_weakly_linked(const RotatingContext& ctx, Vertex p, Vertex q) { return detect_fulcrum(ctx, p, q, ctx.opt.d_weak).empty(); }

Greendlinger greendlinger_check(const RotatingContext& ctx, const std::string& n0, Vertex p) {
  const std::string n = fg::reduce(fg::word_of(n0));
  auto np = act(ctx, n, p);
  if (!np) throw std::out_of_range("greendlinger_check: n·p lies outside the ball");
  const auto& P = ctx.P;
  Greendlinger g;
  DistRow dp = P.graph.row(p);
  for (std::size_t c = 0; c < P.cosets.size(); ++c) {
    std::string core = fg::multiply(fg::multiply(fg::inverse(ctx.rep[c]), n), ctx.rep[c]);
    if (!std::binary_search(ctx.N.begin(), ctx.N.end(), core)) continue;
    Length d = Length::from_ticks(dp[P.apex[c]]);
    if (d <= *ctx.opt.apex_radius && (!g.coset || d < g.apex_distance)) {
      g.coset = c;
      g.apex_distance = d;
    }
  }
  if (g.coset) {
    g.branch = 'B';
    return g;
  }
  g.fulcra = detect_fulcrum(ctx, p, *np, ctx.opt.d_weak);
  if (g.fulcra.empty()) return g;
  std::vector<char> blocked(P.graph.size(), 0);
  for (const auto& w : g.fulcra) blocked[static_cast<std::size_t>(w.apex)] = 1;
  if (avoiding_distance(P.graph, p, *np, blocked) > dp[*np]) g.branch = 'A';
  g.coset = g.fulcra.front().coset;
  g.apex_distance = Length::from_ticks(dp[g.fulcra.front().apex]);
  return g;
}

Separation geometric_separation(const FiniteMetricGraph& base, const std::vector<VertexSet>& cosets, Length eps) {
  Separation s;
  for (std::size_t j = 0; j < cosets.size(); ++j) {
    DistRow row = base.row_to_set(cosets[j]);
    for (std::size_t i = 0; i < cosets.size(); ++i) {
      if (i == j) continue;
      VertexSet near;
      for (Vertex x : cosets[i])
        if (row.reachable(x) && row[x] <= eps.ticks()) near.push_back(x);
      if (near.empty()) continue;
      Length d = set_diameter(base, near);
      if (!s.witness || d > s.M) {
        s.M = d;
        s.witness = std::make_pair(i, j);
      }
    }
  }
  return s;
}

Fold fold_pyramid(const RotatingContext& ctx, int L) {
  const auto& P = ctx.P;
  const auto& fb = ctx.ball;
  const int R = fb.spec.radius;
  Fold f;
  f.L = L;
  UnionFind uf(P.graph.size());
  std::set<std::string> hs;
  if (!ctx.N.empty()) {
    std::vector<std::string> ws{""};
    const std::string alpha = fg::alphabet(fb.spec.rank);
    for (std::size_t i = 0; i < ws.size(); ++i) {
      if (static_cast<int>(ws[i].size()) >= L) continue;
      for (char c : alpha)
        if (ws[i].empty() || ws[i].back() != fg::inv(c)) ws.push_back(ws[i] + c);
    }
    for (const auto& w : ws)
      for (const auto& n : ctx.N) hs.insert(fg::conjugate(w, n));
  }
  f.conjugates = hs.size();
  std::vector<std::vector<Vertex>> children(fb.graph.size());
  for (std::size_t v = 0; v < fb.graph.size(); ++v)
    for (const Arc& a : fb.graph.neighbors(static_cast<Vertex>(v)))
      if (fb.words[static_cast<std::size_t>(a.to)].size() == fb.words[v].size() + 1) children[v].push_back(a.to);
  auto unite = [&](Vertex x, Vertex y) {
    if (uf.unite(x, y)) ++f.identifications;
    for (int k = 1; k <= P.r; ++k) {
      auto a = P.lift(x, k), b = P.lift(y, k);
      if (a && b) uf.unite(*a, *b);
    }
    int cx = P.coset_of[static_cast<std::size_t>(x)], cy = P.coset_of[static_cast<std::size_t>(y)];
    if (cx >= 0 && cy >= 0) uf.unite(P.apex[static_cast<std::size_t>(cx)], P.apex[static_cast<std::size_t>(cy)]);
  };
  for (const auto& h : hs) {
    const int H = static_cast<int>(h.size());
    for (int c = 0; c <= std::min(H, R); ++c) {
      const int maxlen = std::min(R, R - H + 2 * c);
      if (maxlen < c) continue;
      auto root = fb.find(fg::inverse(h.substr(static_cast<std::size_t>(H - c))));
      if (!root) continue;
      const char forbid = c < H ? fg::inv(h[static_cast<std::size_t>(H - c - 1)]) : 0;
      const std::string head = h.substr(0, static_cast<std::size_t>(H - c));
      std::vector<Vertex> stack{*root};
      while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        const std::string& xw = fb.words[static_cast<std::size_t>(x)];
        if (auto y = fb.find(head + xw.substr(static_cast<std::size_t>(c)))) unite(x, *y);
        if (static_cast<int>(xw.size()) >= maxlen) continue;
        for (Vertex ch : children[static_cast<std::size_t>(x)]) {
          if (static_cast<int>(xw.size()) == c && fb.words[static_cast<std::size_t>(ch)].back() == forbid) continue;
          stack.push_back(ch);
        }
      }
    }
  }
  f.cls.resize(P.graph.size());
  for (std::size_t v = 0; v < P.graph.size(); ++v) f.cls[v] = uf.find(static_cast<Vertex>(v));
  return f;
}

int agreement_radius(const RotatingContext& ctx, const Fold& a, const Fold& b) {
  const std::size_t n = ctx.P.graph.size();
  std::vector<int> rad(n);
  for (std::size_t v = 0; v < n; ++v) rad[v] = word_radius(ctx, static_cast<Vertex>(v));
  for (int rho = ctx.ball.spec.radius; rho >= 0; --rho) {
    std::map<Vertex, Vertex> ab, ba;
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      if (rad[v] > rho) continue;
      auto [i, fresh] = ab.emplace(a.cls[v], b.cls[v]);
      auto [j, fresh2] = ba.emplace(b.cls[v], a.cls[v]);
      ok = i->second == b.cls[v] && j->second == a.cls[v];
    }
    if (ok) return rho;
  }
  return -1;
}

QuotientPyramid quotient_pyramid(const RotatingContext& ctx, int L, const DeltaOptions& dopt) {
  QuotientPyramid q;
  q.fold = fold_pyramid(ctx, L);
  Fold next = fold_pyramid(ctx, L + 2);
  q.stable_radius = agreement_radius(ctx, q.fold, next);
  q.stable = q.stable_radius == ctx.ball.spec.radius;
  const auto& G = ctx.P.graph;
  const std::size_t n = G.size();
  GraphBuilder b;
  q.vertex_of.assign(n, -1);
  std::map<Vertex, Vertex> index;
  for (std::size_t v = 0; v < n; ++v) {
    Vertex c = q.fold.cls[v];
    auto it = index.find(c);
    if (it == index.end()) it = index.emplace(c, b.add_vertex(G.id(c))).first;
    q.vertex_of[v] = it->second;
  }
  for (std::size_t v = 0; v < n; ++v)
    for (const Arc& a : G.neighbors(static_cast<Vertex>(v))) {
      Vertex x = q.vertex_of[v], y = q.vertex_of[static_cast<std::size_t>(a.to)];
      if (x < y) b.add_edge(x, y, Length::from_ticks(a.w));
    }
  q.graph = b.build();
  q.delta = gromov_delta(q.graph, dopt);
  if (!ctx.P.cosets.empty()) {
    VertexSet img;
    for (Vertex v : ctx.P.cone(0)) img.push_back(q.vertex_of[static_cast<std::size_t>(v)]);
    q.cone_diameter = set_diameter(q.graph, normalized(img));
  }
  return q;
}

nlohmann::json to_json(const RotatingContext& ctx, const QuotientPyramid& q) {
  nlohmann::json N = nlohmann::json::array();
  for (const auto& n : ctx.N) N.push_back(n);
  return {{"approximate", true}, {"L", q.fold.L}, {"N", N}, {"radius", ctx.ball.spec.radius}, {"r", ctx.P.r},
          {"conjugates", q.fold.conjugates}, {"identifications", q.fold.identifications},
          {"pyramid_size", ctx.P.graph.size()}, {"quotient_size", q.graph.size()}, {"delta", to_json(q.delta)},
          {"stable_radius", q.stable_radius}, {"stable", q.stable}, {"cone_diameter", q.cone_diameter}};
}

QuotientIndex quotient_index_set(const RotatingContext& ctx, int L, std::size_t max_pairs, std::optional<Length> close) {
  const auto& P = ctx.P;
  QuotientIndex qi;
  qi.close = close ? *close : Length::units(2 * (P.r + 1) + 1);
  auto orbits_of = [&](const Fold& f) {
    std::map<Vertex, std::vector<std::size_t>> m;
    for (std::size_t c = 0; c < P.cosets.size(); ++c) m[f.cls[static_cast<std::size_t>(P.apex[c])]].push_back(c);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [k, v] : m) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  };
  Fold f = fold_pyramid(ctx, L);
  qi.orbits = orbits_of(f);
  qi.stable = qi.orbits == orbits_of(fold_pyramid(ctx, L + 2));
  for (std::size_t i = 0; i < qi.orbits.size() && qi.pairs.size() < max_pairs; ++i)
    for (std::size_t j = i + 1; j < qi.orbits.size() && qi.pairs.size() < max_pairs; ++j) {
      LinkedPair lp{i, j, 0, 0, Length::units(1 << 30), false};
      for (std::size_t U : qi.orbits[i]) {
        DistRow row = P.graph.row(P.apex[U]);
        for (std::size_t V : qi.orbits[j]) {
          Length d = Length::from_ticks(row[P.apex[V]]);
          if (d < lp.distance) {
            lp.distance = d;
            lp.U = U;
            lp.V = V;
          }
        }
      }
      lp.linked = is_linked(ctx, P.apex[lp.U], P.apex[lp.V]);
      DistRow row = P.graph.row(P.apex[qi.orbits[i].front()]);
      std::size_t cnt = 0;
      for (std::size_t V : qi.orbits[j])
        if (row[P.apex[V]] <= qi.close.ticks()) ++cnt;
      qi.max_close = std::max(qi.max_close, cnt);
      qi.pairs.push_back(lp);
    }
  return qi;
}

nlohmann::json to_json(const RotatingContext& ctx, const FulcrumWitness& w) {
  const auto& G = ctx.P.graph;
  return {{"apex", G.id(w.apex)}, {"x'", G.id(w.xp)}, {"y'", G.id(w.yp)}, {"h", fg::id_of(w.h)}, {"defect", w.defect}};
}

nlohmann::json to_json(const RotatingContext& ctx, const QuotientIndex& q) {
  const auto& P = ctx.P;
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : q.orbits) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t c : o) a.push_back(P.graph.id(P.apex[c]));
    orbits.push_back(a);
  }
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : q.pairs)
    pairs.push_back({{"U", P.graph.id(P.apex[p.U])}, {"V", P.graph.id(P.apex[p.V])}, {"distance", p.distance}, {"linked", p.linked}});
  return {{"approximate", true}, {"orbits", orbits}, {"stable", q.stable}, {"pairs", pairs},
          {"close", q.close}, {"max_close", q.max_close}};
}

}  // namespace hhs
