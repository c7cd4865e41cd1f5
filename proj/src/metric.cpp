#include "hhs/metric.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "hhs/errors.hpp"
#include "hhs/rng.hpp"

namespace hhs {

VertexSet interval(const FiniteMetricGraph& g, Vertex u, Vertex v) {
  DistRow du = g.row(u), dv = g.row(v);
  if (!du.reachable(v)) throw UnreachableError("interval of unreachable pair");
  const std::int64_t duv = du[v];
  VertexSet out;
  for (std::size_t x = 0; x < g.size(); ++x) {
    Vertex xv = static_cast<Vertex>(x);
    if (du.reachable(xv) && du[xv] + dv[xv] == duv) out.push_back(xv);
  }
  return out;
}

Length hausdorff(const FiniteMetricGraph& g, const VertexSet& a, const VertexSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff: empty set");
  DistRow da = g.row_to_set(a), db = g.row_to_set(b);
  std::int64_t best = 0;
  for (Vertex x : a) {
    if (!db.reachable(x)) throw UnreachableError("hausdorff: sets in different components");
    best = std::max(best, db[x]);
  }
  for (Vertex y : b) best = std::max(best, da[y]);
  return Length::from_ticks(best);
}

Length set_distance(const FiniteMetricGraph& g, const VertexSet& a, const VertexSet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("set_distance: empty set");
  if (a.size() == 1 && b.size() == 1) return g.d(a[0], b[0]);
  if (g.dense() && a.size() * b.size() <= 64) {
    std::int64_t best = DistRow::kFar;
    for (Vertex x : a)
      for (Vertex y : b) best = std::min(best, g.dt(x, y));
    return Length::from_ticks(best);
  }
  const VertexSet& small = a.size() <= b.size() ? a : b;
  const VertexSet& big = a.size() <= b.size() ? b : a;
  std::int64_t best = DistRow::kFar;
  if (small.size() == 1) {
    DistRow r = g.row(small[0]);
    for (Vertex y : big) best = std::min(best, r[y]);
  } else {
    DistRow r = g.row_to_set(small);
    for (Vertex y : big) best = std::min(best, r[y]);
  }
  if (best == DistRow::kFar) throw UnreachableError("set_distance: sets in different components");
  return Length::from_ticks(best);
}

Length set_diameter(const FiniteMetricGraph& g, const VertexSet& a) {
  std::int64_t best = 0;
  if (g.dense()) {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = i + 1; j < a.size(); ++j) best = std::max(best, g.dt(a[i], a[j]));
    return Length::from_ticks(best);
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.size() == 1) break;
    DistRow r = g.row(a[i]);
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (!r.reachable(a[j])) throw UnreachableError("set_diameter: disconnected set");
      best = std::max(best, r[a[j]]);
    }
  }
  return Length::from_ticks(best);
}

Length diameter(const FiniteMetricGraph& g) { return set_diameter(g, all_vertices(g)); }

VertexSet ball(const FiniteMetricGraph& g, Vertex c, Length r) {
  DistRow d = g.row(c);
  VertexSet out;
  for (std::size_t x = 0; x < g.size(); ++x)
    if (d[static_cast<Vertex>(x)] <= r.ticks()) out.push_back(static_cast<Vertex>(x));
  return out;
}

VertexSet neighborhood(const FiniteMetricGraph& g, const VertexSet& s, Length r) {
  if (s.empty()) return {};
  DistRow d = g.row_to_set(s);
  VertexSet out;
  for (std::size_t x = 0; x < g.size(); ++x)
    if (d[static_cast<Vertex>(x)] <= r.ticks()) out.push_back(static_cast<Vertex>(x));
  return out;
}

std::vector<Vertex> geodesic(const FiniteMetricGraph& g, Vertex u, Vertex v) {
  DistRow dv = g.row(v);
  if (!dv.reachable(u)) throw UnreachableError("geodesic: unreachable pair");
  std::vector<Vertex> path{u};
  Vertex cur = u;
  while (cur != v) {
    Vertex next = -1;
    for (const Arc& a : g.neighbors(cur))
      if (dv[a.to] + a.w == dv[cur]) {
        next = a.to;
        break;  // arcs sorted by target index
      }
    cur = next;
    path.push_back(cur);
  }
  return path;
}

namespace {

struct PairD {
  std::int64_t d;
  Vertex a, b;
};

// Pair-sorted four-point scan with the bound h <= 2 min(d(x,y), d(z,w)).
template <class DistFn>
DeltaEstimate four_point(std::vector<PairD> pairs, DistFn dist, std::uint64_t& work) {
  std::sort(pairs.begin(), pairs.end(), [](const PairD& p, const PairD& q) {
    if (p.d != q.d) return p.d > q.d;
    if (p.a != q.a) return p.a < q.a;
    return p.b < q.b;
  });
  std::int64_t best = 0;  // doubled delta, in ticks
  std::array<Vertex, 4> wit{-1, -1, -1, -1};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const PairD& p = pairs[i];
    if (2 * p.d <= best) break;
    for (std::size_t j = 0; j < i; ++j) {
      const PairD& q = pairs[j];
      ++work;
      std::int64_t s1 = p.d + q.d;
      std::int64_t s2 = dist(p.a, q.a) + dist(p.b, q.b);
      std::int64_t s3 = dist(p.a, q.b) + dist(p.b, q.a);
      std::int64_t h = s1 - std::max(s2, s3);
      if (h > best) {
        best = h;
        wit = {p.a, p.b, q.a, q.b};
      }
    }
  }
  DeltaEstimate e;
  e.delta = Length::from_ticks(best).half_ceil();
  if (wit[0] >= 0) e.witness.assign(wit.begin(), wit.end());
  return e;
}

}  // namespace

DeltaEstimate gromov_delta_on(const FiniteMetricGraph& g, const VertexSet& pool) {
  const std::size_t m = pool.size();
  std::vector<std::int64_t> t(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    DistRow r = g.row(pool[i]);
    for (std::size_t j = 0; j < m; ++j) {
      if (!r.reachable(pool[j])) throw UnreachableError("gromov_delta: disconnected graph");
      t[i * m + j] = r[pool[j]];
    }
  }
  std::vector<PairD> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) pairs.push_back({t[i * m + j], static_cast<Vertex>(i), static_cast<Vertex>(j)});
  std::uint64_t work = 0;
  DeltaEstimate e = four_point(std::move(pairs), [&](Vertex a, Vertex b) { return t[static_cast<std::size_t>(a) * m + static_cast<std::size_t>(b)]; }, work);
  for (Vertex& w : e.witness) w = pool[static_cast<std::size_t>(w)];
  e.pool = m;
  e.quadruples = m < 4 ? 0 : static_cast<std::uint64_t>(m) * (m - 1) * (m - 2) * (m - 3) / 24;
  return e;
}

DeltaEstimate gromov_delta(const FiniteMetricGraph& g, const DeltaOptions& opt) {
  const std::size_t n = g.size();
  if (!g.connected()) throw UnreachableError("gromov_delta: disconnected graph");
  if (n < 4) {
    DeltaEstimate e;
    e.pool = n;
    return e;
  }
  if (n > opt.exhaustive_limit) {
    Rng rng(opt.seed);
    VertexSet pool;
    for (std::size_t i : rng.sample(n, opt.sample_pool)) pool.push_back(static_cast<Vertex>(i));
    DeltaEstimate e = gromov_delta_on(g, pool);
    e.exhaustive = false;
    return e;
  }
  // Far-apart pairs suffice on unit graphs: some optimal quadruple is made of two of them.
  std::vector<DistRow> rows(n);
  for (std::size_t v = 0; v < n; ++v) rows[v] = g.row(static_cast<Vertex>(v));
  const bool prune = g.unit_weight();
  std::vector<PairD> pairs;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      std::int64_t dxy = rows[x][static_cast<Vertex>(y)];
      bool far = true;
      if (prune) {
        for (const Arc& a : g.neighbors(static_cast<Vertex>(x)))
          if (rows[y][a.to] > dxy) {
            far = false;
            break;
          }
        if (far)
          for (const Arc& a : g.neighbors(static_cast<Vertex>(y)))
            if (rows[x][a.to] > dxy) {
              far = false;
              break;
            }
      }
      if (far) pairs.push_back({dxy, static_cast<Vertex>(x), static_cast<Vertex>(y)});
    }
  std::uint64_t work = 0;
  DeltaEstimate e = four_point(std::move(pairs), [&](Vertex a, Vertex b) { return rows[static_cast<std::size_t>(a)][b]; }, work);
  e.exhaustive = true;
  e.pool = n;
  e.quadruples = static_cast<std::uint64_t>(n) * (n - 1) * (n - 2) * (n - 3) / 24;
  return e;
}

QuasiconvexityResult is_quasiconvex(const FiniteMetricGraph& g, const VertexSet& y, Length q) {
  QuasiconvexityResult res;
  if (y.empty()) throw std::invalid_argument("is_quasiconvex: empty set");
  DistRow dy = g.row_to_set(y);
  // Only vertices farther than the running worst can improve it.
  std::vector<Vertex> order = all_vertices(g);
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    if (dy[a] != dy[b]) return dy[a] > dy[b];
    return a < b;
  });
  std::vector<DistRow> rows;
  rows.reserve(y.size());
  for (Vertex v : y) rows.push_back(g.row(v));
  std::int64_t worst = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j) {
      const DistRow& ru = rows[i];
      const DistRow& rv = rows[j];
      if (!ru.reachable(y[j])) throw UnreachableError("is_quasiconvex: disconnected set");
      const std::int64_t duv = ru[y[j]];
      for (Vertex z : order) {
        if (dy[z] <= worst) break;
        if (ru[z] + rv[z] == duv) {
          worst = dy[z];
          res.witness = std::array<Vertex, 3>{y[i], y[j], z};
          break;
        }
      }
    }
  res.worst = Length::from_ticks(worst);
  res.ok = res.worst <= q;
  if (res.ok) res.witness.reset();
  return res;
}

Length quasiconvexity_constant(const FiniteMetricGraph& g, const VertexSet& y) {
  return is_quasiconvex(g, y, Length::units(0)).worst;
}

namespace {

Length epsilon_for(Length lambda, const std::vector<DistancePair>& pairs) {
  Length eps;
  for (const auto& p : pairs) {
    eps = max(eps, p.d2 - p.d1.times(lambda));
    Length back = p.d1 - p.d2.times(lambda);
    if (back.ticks() > 0) eps = max(eps, back.div_ceil(lambda));
  }
  return eps;
}

}  // namespace

QiFit qi_fit(const std::vector<DistancePair>& pairs) {
  if (pairs.empty()) throw std::invalid_argument("qi_fit: empty pair list");
  std::int64_t top = 1;
  for (const auto& p : pairs) {
    if (p.d1.ticks() < 0 || p.d2.ticks() < 0) throw std::invalid_argument("qi_fit: negative distance");
    if (p.d1.ticks() > 0 && p.d2.ticks() > 0) {
      top = std::max(top, p.d2.div_ceil(p.d1).ceil_units());
      top = std::max(top, p.d1.div_ceil(p.d2).ceil_units());
    }
  }
  top = std::min<std::int64_t>(top, 64);
  QiFit best;
  bool have = false;
  for (std::int64_t k = 8; k <= 8 * top; ++k) {
    Length lambda = Length::ratio(k, 8);
    Length eps = epsilon_for(lambda, pairs);
    if (!have || lambda + eps < best.lambda + best.epsilon) {
      best = {lambda, eps};
      have = true;
    }
  }
  return best;
}

bool qi_fit_holds(const QiFit& f, const std::vector<DistancePair>& pairs) {
  for (const auto& p : pairs) {
    if (p.d2 > p.d1.times(f.lambda) + f.epsilon) return false;
    if (p.d1 > p.d2.times(f.lambda) + f.epsilon.times(f.lambda)) return false;
  }
  return true;
}

nlohmann::json to_json(const DeltaEstimate& d) {
  nlohmann::json j{{"delta", d.delta}, {"exhaustive", d.exhaustive}, {"quadruples", d.quadruples}, {"pool", d.pool}};
  return j;
}

nlohmann::json to_json(const QiFit& f) { return {{"lambda", f.lambda}, {"epsilon", f.epsilon}}; }

}  // namespace hhs
