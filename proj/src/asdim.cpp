#include "hhs/asdim.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hhs/errors.hpp"
#include "hhs/factored.hpp"
#include "hhs/hull.hpp"
#include "hhs/metric.hpp"
#include "hhs/rng.hpp"

namespace hhs {

namespace {

constexpr std::size_t kMaxViolations = 8;

struct UnionFind {
  std::vector<std::size_t> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a), b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

// Sets of one family whose distance is at most D end up in one set.
std::vector<VertexSet> merge_close(const FiniteMetricGraph& X, std::vector<VertexSet> sets, Length D) {
  std::erase_if(sets, [](const VertexSet& s) { return s.empty(); });
  if (sets.size() < 2) return sets;
  std::vector<std::vector<std::size_t>> owner(X.size());
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (Vertex v : sets[i]) owner[static_cast<std::size_t>(v)].push_back(i);
  UnionFind uf(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    DistRow row = X.row_to_set(sets[i]);
    for (std::size_t v = 0; v < X.size(); ++v)
      if (row.reachable(static_cast<Vertex>(v)) && row[static_cast<Vertex>(v)] <= D.ticks())
        for (std::size_t j : owner[v]) uf.unite(i, j);
  }
  std::map<std::size_t, VertexSet> merged;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto& m = merged[uf.find(i)];
    m = set_union(m, sets[i]);
  }
  std::vector<VertexSet> out;
  for (auto& [k, s] : merged) out.push_back(std::move(s));
  return out;
}

VertexSet restrict_to(const VertexSet& s, const VertexSet& part) { return set_intersection(s, part); }

Cover restrict_cover(const Cover& c, const VertexSet& part) {
  Cover r;
  r.D = c.D;
  r.provenance = c.provenance;
  for (const auto& fam : c.families) {
    std::vector<VertexSet> f;
    for (const auto& s : fam) {
      VertexSet t = restrict_to(s, part);
      if (!t.empty()) f.push_back(std::move(t));
    }
    if (!f.empty()) r.families.push_back(std::move(f));
  }
  return r;
}

bool covers(const FiniteMetricGraph& X, const Cover& c, const VertexSet& part, Vertex* missing) {
  std::vector<char> hit(X.size(), 0);
  for (const auto& fam : c.families)
    for (const auto& s : fam)
      for (Vertex v : s) hit[static_cast<std::size_t>(v)] = 1;
  for (Vertex v : part)
    if (!hit[static_cast<std::size_t>(v)]) {
      if (missing) *missing = v;
      return false;
    }
  return true;
}

std::vector<std::int64_t> parse_coords(const std::string& id) {
  std::vector<std::int64_t> c;
  std::stringstream ss(id);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      c.push_back(std::stoll(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("brick_cover: vertex id '" + id + "' is not a coordinate tuple");
    }
  }
  return c;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) { return a / b - ((a % b != 0) && ((a < 0) != (b < 0))); }

bool on_interval(const FiniteMetricGraph& X, Vertex a, Vertex w, Vertex b) {
  return X.dt(a, w) + X.dt(w, b) == X.dt(a, b);
}

Length half_floor(Length r) { return Length::from_ticks(r.ticks() / 2); }

}  // namespace

std::size_t Cover::set_count() const {
  std::size_t n = 0;
  for (const auto& f : families) n += f.size();
  return n;
}

CoverVerdict verify_cover(const FiniteMetricGraph& X, const Cover& c, Length D) {
  CoverVerdict v;
  auto add = [&](nlohmann::json j) {
    v.ok = false;
    if (v.violations.size() < kMaxViolations) v.violations.push_back(std::move(j));
  };
  std::vector<char> hit(X.size(), 0);
  for (std::size_t f = 0; f < c.families.size(); ++f)
    for (std::size_t i = 0; i < c.families[f].size(); ++i) {
      const auto& s = c.families[f][i];
      if (s.empty()) {
        add({{"kind", "empty"}, {"family", f}, {"set", i}});
        continue;
      }
      for (Vertex x : s) hit[static_cast<std::size_t>(x)] = 1;
      v.B = max(v.B, set_diameter(X, s));
    }
  for (std::size_t x = 0; x < X.size(); ++x)
    if (!hit[x]) add({{"kind", "coverage"}, {"vertex", X.id(static_cast<Vertex>(x))}});
  for (std::size_t f = 0; f < c.families.size(); ++f) {
    const auto& fam = c.families[f];
    std::vector<std::vector<std::size_t>> owner(X.size());
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (Vertex x : fam[i]) owner[static_cast<std::size_t>(x)].push_back(i);
    for (std::size_t i = 0; i < fam.size(); ++i) {
      if (fam[i].empty()) continue;
      DistRow row = X.row_to_set(fam[i]);
      std::vector<char> reported(fam.size(), 0);
      for (std::size_t x = 0; x < X.size(); ++x) {
        if (!row.reachable(static_cast<Vertex>(x)) || row[static_cast<Vertex>(x)] > D.ticks()) continue;
        for (std::size_t j : owner[x]) {
          if (j <= i || reported[j]) continue;
          reported[j] = 1;
          add({{"kind", "separation"}, {"family", f}, {"sets", {i, j}}, {"vertex", X.id(static_cast<Vertex>(x))},
               {"distance", Length::from_ticks(row[static_cast<Vertex>(x)])}});
        }
      }
    }
  }
  if (c.B && v.B > *c.B) add({{"kind", "diameter"}, {"bound", *c.B}, {"observed", v.B}});
  return v;
}

Multiplicity multiplicity(const FiniteMetricGraph& X, const Cover& c, Length r) {
  std::vector<std::size_t> count(X.size(), 0);
  for (const auto& fam : c.families)
    for (const auto& s : fam) {
      if (s.empty()) continue;
      DistRow row = X.row_to_set(s);
      for (std::size_t x = 0; x < X.size(); ++x)
        if (row.reachable(static_cast<Vertex>(x)) && row[static_cast<Vertex>(x)] <= r.ticks()) ++count[x];
    }
  Multiplicity m;
  for (std::size_t x = 0; x < X.size(); ++x)
    if (count[x] > m.m) m = {count[x], static_cast<Vertex>(x)};
  return m;
}

Cover brick_cover(const FiniteMetricGraph& grid, Length D) {
  if (D < Length()) throw std::invalid_argument("brick_cover: negative D");
  std::vector<std::vector<std::int64_t>> coord(grid.size());
  std::size_t n = 0;
  for (std::size_t v = 0; v < grid.size(); ++v) {
    coord[v] = parse_coords(grid.id(static_cast<Vertex>(v)));
    if (v == 0) n = coord[v].size();
    if (coord[v].size() != n) throw ParseError("brick_cover: mixed coordinate counts");
  }
  Cover c;
  c.D = D;
  c.provenance = {"brick"};
  const std::int64_t d = D.ceil_units();
  if (d == 0) {
    std::vector<VertexSet> singles;
    for (std::size_t v = 0; v < grid.size(); ++v) singles.push_back({static_cast<Vertex>(v)});
    c.families.push_back(std::move(singles));
    return c;
  }
  const std::int64_t L = 2 * static_cast<std::int64_t>(n + 1) * d;
  for (std::size_t i = 0; i <= n; ++i) {
    const std::int64_t shift = 2 * static_cast<std::int64_t>(i) * d;
    std::map<std::vector<std::int64_t>, VertexSet> bricks;
    for (std::size_t v = 0; v < grid.size(); ++v) {
      std::vector<std::int64_t> key(n);
      bool inside = true;
      for (std::size_t j = 0; j < n && inside; ++j) {
        std::int64_t t = coord[v][j] - shift;
        key[j] = floor_div(t, L);
        inside = t - key[j] * L < L - d;
      }
      if (inside) bricks[key].push_back(static_cast<Vertex>(v));
    }
    std::vector<VertexSet> fam;
    for (auto& [k, s] : bricks) fam.push_back(std::move(s));
    c.families.push_back(std::move(fam));
    if (i == 0 && covers(grid, c, all_vertices(grid), nullptr)) break;
  }
  std::erase_if(c.families, [](const auto& f) { return f.empty(); });
  return c;
}

VertexSet beta(const FiniteMetricGraph& X, const TightnessData& T, Vertex x, Vertex y) {
  if (T.kind == "interval") return interval(X, x, y);
  if (T.kind == "geodesic") return normalized(geodesic(X, x, y));
  if (T.kind == "whole") return all_vertices(X);
  throw std::invalid_argument("unknown tightness kind '" + T.kind + "'");
}

TightCheck check_tight(const FiniteMetricGraph& X, const TightnessData& T, Length r, Length delta,
                       std::size_t triple_budget, std::uint64_t seed) {
  TightCheck out;
  const std::size_t n = X.size();
  Rng rng(seed);

  // (1) β(x,y) within C of a geodesic
  std::vector<std::pair<Vertex, Vertex>> pairs;
  if (n * n <= triple_budget) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = x; y < n; ++y) pairs.emplace_back(static_cast<Vertex>(x), static_cast<Vertex>(y));
  } else {
    out.exhaustive = false;
    for (std::size_t i = 0; i < triple_budget / 4; ++i)
      pairs.emplace_back(static_cast<Vertex>(rng.below(n)), static_cast<Vertex>(rng.below(n)));
  }
  for (auto [x, y] : pairs) {
    if (!X.dist(x, y)) continue;
    VertexSet g = normalized(geodesic(X, x, y));
    Length hd = hausdorff(X, beta(X, T, x, y), g);
    if (hd > out.hausdorff) {
      out.hausdorff = hd;
      if (hd > T.C) out.witness = {{"condition", 1}, {"x", X.id(x)}, {"y", X.id(y)}, {"hausdorff", hd}};
    }
  }

  // (2) few β-points near a deep interval point
  const Length reach = r + T.C;
  const Length rho = delta * 2 + T.C * 2;
  auto measure = [&](Vertex x, Vertex y, Vertex z) {
    ++out.triples;
    VertexSet near = ball(X, y, rho), bx = ball(X, x, r), bz = ball(X, z, r);
    std::vector<char> mark(near.size(), 0);
    for (Vertex a : bx)
      for (Vertex b : bz) {
        if (!X.dist(a, b)) continue;
        if (T.kind == "interval") {
          for (std::size_t i = 0; i < near.size(); ++i)
            if (!mark[i] && on_interval(X, a, near[i], b)) mark[i] = 1;
        } else {
          VertexSet bs = beta(X, T, a, b);
          for (std::size_t i = 0; i < near.size(); ++i)
            if (!mark[i] && contains(bs, near[i])) mark[i] = 1;
        }
      }
    std::size_t k = static_cast<std::size_t>(std::count(mark.begin(), mark.end(), 1));
    if (k > out.K) {
      out.K = k;
      if (T.K && k > *T.K)
        out.witness = {{"condition", 2}, {"x", X.id(x)}, {"y", X.id(y)}, {"z", X.id(z)}, {"count", k}};
    }
  };
  auto deep = [&](Vertex x, Vertex y, Vertex z) {
    return X.d(x, y) >= reach && X.d(y, z) >= reach && on_interval(X, x, y, z);
  };
  if (n * n * n <= triple_budget) {
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t z = x + 1; z < n; ++z) {
        if (!X.dist(static_cast<Vertex>(x), static_cast<Vertex>(z))) continue;
        for (std::size_t y = 0; y < n; ++y)
          if (deep(static_cast<Vertex>(x), static_cast<Vertex>(y), static_cast<Vertex>(z)))
            measure(static_cast<Vertex>(x), static_cast<Vertex>(y), static_cast<Vertex>(z));
      }
  } else {
    out.exhaustive = false;
    for (std::size_t t = 0; t < triple_budget; ++t) {
      Vertex x = static_cast<Vertex>(rng.below(n)), z = static_cast<Vertex>(rng.below(n));
      if (!X.dist(x, z) || X.d(x, z) < reach * 2) continue;
      VertexSet I = interval(X, x, z);
      VertexSet ok;
      for (Vertex y : I)
        if (X.d(x, y) >= reach && X.d(y, z) >= reach) ok.push_back(y);
      if (ok.empty()) continue;
      measure(x, ok[rng.below(ok.size())], z);
    }
  }
  out.pass = out.hausdorff <= T.C && (!T.K || out.K <= *T.K);
  return out;
}

VertexSet beta_M(const HierarchicalStructure& h, const FiniteMetricGraph& hat, Vertex x, Vertex y, Length M) {
  const Domain S = h.top();
  DistRow near = hat.row_to_set(normalized(geodesic(hat, x, y)));
  VertexSet out;
  for (std::size_t z = 0; z < hat.size(); ++z) {
    Vertex v = static_cast<Vertex>(z);
    if (!near.reachable(v) || near[v] > M.ticks()) continue;
    bool ok = true;
    for (std::size_t u = 0; u < h.domain_count() && ok; ++u) {
      if (static_cast<Domain>(u) == S) continue;
      ok = min(h.du(static_cast<Domain>(u), v, x), h.du(static_cast<Domain>(u), v, y)) <= M;
    }
    if (ok) out.push_back(v);
  }
  return out;
}

AsdimCertificate tight_cover(const FiniteMetricGraph& X, const TightnessData& T, Vertex x0, Length r, Length l) {
  if (r + l <= Length()) throw std::invalid_argument("tight_cover: r + l must be positive");
  const Length unit = (r + l) * 10;
  DistRow from = X.row(x0);
  std::int64_t far = 0;
  for (std::size_t v = 0; v < X.size(); ++v)
    if (from.reachable(static_cast<Vertex>(v))) far = std::max(far, from[static_cast<Vertex>(v)]);
    else throw UnreachableError("tight_cover: space is not connected");
  const std::int64_t N = std::max<std::int64_t>(1, (far + unit.ticks() - 1) / unit.ticks());

  std::vector<VertexSet> annulus(static_cast<std::size_t>(N) + 1), sphere(static_cast<std::size_t>(N) + 1);
  for (std::size_t v = 0; v < X.size(); ++v) {
    std::int64_t d = from[static_cast<Vertex>(v)];
    for (std::int64_t k = 1; k <= N; ++k)
      if ((k - 1) * unit.ticks() <= d && d <= k * unit.ticks()) annulus[static_cast<std::size_t>(k)].push_back(static_cast<Vertex>(v));
    if (d % unit.ticks() == 0 && d / unit.ticks() <= N) sphere[static_cast<std::size_t>(d / unit.ticks())].push_back(static_cast<Vertex>(v));
  }

  AsdimCertificate cert;
  cert.scale = r;
  cert.cover.D = r;
  cert.cover.provenance = {"tight"};
  cert.cover.families.resize(N >= 2 ? 2 : 1);
  std::size_t slices = 0;
  for (std::int64_t k = 1; k <= N; ++k) {
    const auto& A = annulus[static_cast<std::size_t>(k)];
    if (A.empty()) continue;
    auto& fam = cert.cover.families[static_cast<std::size_t>((k - 1) % 2)];
    const VertexSet* S = k >= 3 ? &sphere[static_cast<std::size_t>(k - 2)] : nullptr;
    if (!S || S->empty()) {
      fam.push_back(A);
      continue;
    }
    std::set<VertexSet> pieces;
    std::vector<char> used(X.size(), 0);
    for (Vertex s : *S) {
      VertexSet near = ball(X, s, T.C);
      VertexSet B;
      for (Vertex x : A) {
        bool hit = false;
        if (T.kind == "interval") {
          for (Vertex w : near)
            if (on_interval(X, x0, w, x)) {
              hit = true;
              break;
            }
        } else {
          VertexSet bs = beta(X, T, x0, x);
          for (Vertex w : near)
            if (contains(bs, w)) {
              hit = true;
              break;
            }
        }
        if (hit) {
          B.push_back(x);
          used[static_cast<std::size_t>(x)] = 1;
        }
      }
      if (!B.empty()) pieces.insert(std::move(B));
    }
    VertexSet rest;
    for (Vertex x : A)
      if (!used[static_cast<std::size_t>(x)]) rest.push_back(x);
    if (!rest.empty()) pieces.insert(std::move(rest));
    slices += pieces.size();
    for (const auto& p : pieces) fam.push_back(p);
  }
  std::erase_if(cert.cover.families, [](const auto& f) { return f.empty(); });

  const Length Cp = max(T.C, Length::units(1));
  cert.bound = Cp.times(r + l) * 100;
  cert.cover.B = cert.bound;
  cert.mult = multiplicity(X, cert.cover, half_floor(r));
  std::size_t K = T.K ? *T.K : check_tight(X, T, r, Length()).K;
  Length worst;
  for (const auto& f : cert.cover.families)
    for (const auto& s : f) worst = max(worst, set_diameter(X, s));
  cert.extra = {{"x0", X.id(x0)},          {"r", r},
                {"l", l},                  {"unit", unit},
                {"annuli", N},             {"slices", slices},
                {"K", K},                  {"multiplicity_bound", 2 * K},
                {"multiplicity_ok", cert.mult.m <= 2 * K},
                {"diameter", worst},       {"diameter_ok", worst <= cert.bound}};
  return cert;
}

CombineResult union_combine(const FiniteMetricGraph& X, const std::vector<Piece>& pieces, const Piece& Y, Length R) {
  CombineResult res;
  auto reject = [&](std::string why, nlohmann::json w) {
    res.ok = false;
    res.reason = std::move(why);
    res.witness = std::move(w);
    return res;
  };
  VertexSet all = Y.set;
  for (const auto& p : pieces) all = set_union(all, p.set);
  if (all.size() != X.size()) {
    Vertex miss = set_difference(all_vertices(X), all).front();
    return reject("pieces do not cover the space", {{"vertex", X.id(miss)}});
  }
  Vertex miss = -1;
  for (std::size_t i = 0; i < pieces.size(); ++i)
    if (!covers(X, pieces[i].cover, pieces[i].set, &miss))
      return reject("piece cover misses a point", {{"piece", i}, {"vertex", X.id(miss)}});
  if (!covers(X, Y.cover, Y.set, &miss)) return reject("Y cover misses a point", {{"vertex", X.id(miss)}});

  std::vector<VertexSet> trimmed;
  for (const auto& p : pieces) trimmed.push_back(set_difference(p.set, Y.set));
  for (std::size_t i = 0; i < trimmed.size(); ++i) {
    if (trimmed[i].empty()) continue;
    DistRow row = X.row_to_set(trimmed[i]);
    for (std::size_t j = i + 1; j < trimmed.size(); ++j)
      for (Vertex x : trimmed[j])
        if (row.reachable(x) && row[x] < R.ticks())
          return reject("pieces off Y are closer than R",
                        {{"pieces", {i, j}}, {"vertex", X.id(x)}, {"distance", Length::from_ticks(row[x])}, {"R", R}});
  }

  Length D = Y.cover.D;
  std::size_t F = Y.cover.families.size();
  for (const auto& p : pieces) {
    D = min(D, p.cover.D);
    F = std::max(F, p.cover.families.size());
  }
  res.cover.D = D;
  res.cover.provenance = {"union"};
  for (std::size_t k = 0; k < F; ++k) {
    std::vector<VertexSet> fam;
    for (std::size_t i = 0; i < pieces.size(); ++i)
      if (k < pieces[i].cover.families.size())
        for (const auto& s : pieces[i].cover.families[k]) fam.push_back(set_intersection(s, trimmed[i]));
    if (k < Y.cover.families.size())
      for (const auto& s : Y.cover.families[k]) fam.push_back(set_intersection(s, Y.set));
    fam = merge_close(X, std::move(fam), D);
    if (!fam.empty()) res.cover.families.push_back(std::move(fam));
  }
  CoverVerdict v = verify_cover(X, res.cover, D);
  res.cover.B = v.B;
  if (!v.ok) return reject("combined cover fails verification", v.violations.front());
  return res;
}

CombineResult fibration_combine(const FiniteMetricGraph& X, const FiniteMetricGraph& Y, const std::vector<Vertex>& psi,
                                const Cover& ycover, const std::vector<Cover>& fibers, Length lipschitz_bound) {
  CombineResult res;
  auto reject = [&](std::string why, nlohmann::json w) {
    res.ok = false;
    res.reason = std::move(why);
    res.witness = std::move(w);
    return res;
  };
  if (psi.size() != X.size()) throw std::invalid_argument("fibration_combine: psi must map every vertex");
  if (fibers.size() != ycover.set_count()) throw std::invalid_argument("fibration_combine: one fiber cover per Y set");
  if (lipschitz_bound <= Length()) throw std::invalid_argument("fibration_combine: Lipschitz bound must be positive");

  Length lip;
  for (std::size_t u = 0; u < X.size(); ++u)
    for (const Arc& a : X.neighbors(static_cast<Vertex>(u))) {
      auto dy = Y.dist(psi[u], psi[static_cast<std::size_t>(a.to)]);
      if (!dy) return reject("psi separates an edge", {{"edge", {X.id(static_cast<Vertex>(u)), X.id(a.to)}}});
      Length q = dy->div_ceil(Length::from_ticks(a.w));
      if (q > lip) lip = q;
      if (q > lipschitz_bound)
        return reject("psi is not Lipschitz with the given bound",
                      {{"edge", {X.id(static_cast<Vertex>(u)), X.id(a.to)}}, {"ratio", q}, {"bound", lipschitz_bound}});
    }

  Length D = Length::from_ticks(ycover.D.ticks() * Length::kScale / lipschitz_bound.ticks());
  std::size_t Fb = 0;
  for (const auto& f : fibers) {
    D = min(D, f.D);
    Fb = std::max(Fb, f.families.size());
  }
  std::vector<std::vector<VertexSet>> prod(ycover.families.size() * std::max<std::size_t>(Fb, 1));
  std::size_t idx = 0;
  for (std::size_t a = 0; a < ycover.families.size(); ++a)
    for (const auto& V : ycover.families[a]) {
      VertexSet pre;
      for (std::size_t x = 0; x < X.size(); ++x)
        if (contains(V, psi[x])) pre.push_back(static_cast<Vertex>(x));
      const Cover& fc = fibers[idx++];
      Vertex miss = -1;
      if (!covers(X, fc, pre, &miss))
        return reject("fiber cover misses a point of its preimage", {{"y_set", idx - 1}, {"vertex", X.id(miss)}});
      for (std::size_t b = 0; b < fc.families.size(); ++b)
        for (const auto& F : fc.families[b]) {
          VertexSet s = set_intersection(F, pre);
          if (!s.empty()) prod[a * Fb + b].push_back(std::move(s));
        }
    }
  std::erase_if(prod, [](const auto& f) { return f.empty(); });

  // greedy pass: fold a family into an earlier one when the union stays D-separated
  std::vector<std::vector<VertexSet>> fams;
  for (auto& f : prod) {
    VertexSet fv;
    for (const auto& s : f) fv = set_union(fv, s);
    bool placed = false;
    for (auto& g : fams) {
      VertexSet gv;
      for (const auto& s : g) gv = set_union(gv, s);
      DistRow row = X.row_to_set(gv);
      bool apart = true;
      for (Vertex x : fv)
        if (row.reachable(x) && row[x] <= D.ticks()) {
          apart = false;
          break;
        }
      if (apart) {
        g.insert(g.end(), f.begin(), f.end());
        placed = true;
        break;
      }
    }
    if (!placed) fams.push_back(std::move(f));
  }
  res.cover.families = std::move(fams);
  res.cover.D = D;
  res.cover.provenance = {"fibration"};
  CoverVerdict v = verify_cover(X, res.cover, D);
  res.cover.B = v.B;
  res.witness = {{"lipschitz", lip}, {"product_families", prod.size()}};
  if (!v.ok) return reject("combined cover fails verification", v.violations.front());
  return res;
}

LevelProfile level_profile(const DomainIndex& d) {
  LevelProfile p;
  p.level = d.levels();
  for (int l : p.level) p.xi = std::max(p.xi, l);
  for (int l = 1; l <= p.xi; ++l) {
    std::vector<Domain> at;
    for (std::size_t u = 0; u < d.size(); ++u)
      if (p.level[u] == l) at.push_back(static_cast<Domain>(u));
    std::size_t best = 0;
    std::vector<Domain> chosen;
    auto grow = [&](auto&& self, std::size_t from) -> void {
      best = std::max(best, chosen.size());
      if (chosen.size() + (at.size() - from) <= best) return;
      for (std::size_t i = from; i < at.size(); ++i) {
        bool ok = std::all_of(chosen.begin(), chosen.end(), [&](Domain c) { return d.orthogonal(c, at[i]); });
        if (!ok) continue;
        chosen.push_back(at[i]);
        self(self, i + 1);
        chosen.pop_back();
      }
    };
    grow(grow, 0);
    p.P[l] = best;
  }
  return p;
}

std::int64_t asdim_bound(const LevelProfile& p, std::int64_t n, const std::map<int, std::int64_t>& Delta) {
  std::int64_t b = n * p.xi;
  for (int l = 2; l <= p.xi; ++l) {
    auto it = Delta.find(l);
    b += static_cast<std::int64_t>(p.P.at(l)) * (it == Delta.end() ? 1 : it->second);
  }
  return b;
}

PipelineResult asdim_pipeline(const HierarchicalStructure& h, const PipelineOptions& opt) {
  PipelineResult res;
  const FiniteMetricGraph& X = h.ambient;
  res.profile = level_profile(h.index);
  res.bound = asdim_bound(res.profile, opt.n, opt.Delta);
  res.stages.push_back({{"stage", "level_profile"}, {"xi", res.profile.xi}, {"bound", res.bound}});
  const bool grid = h.meta.value("kind", std::string()) == "grid";
  TightnessData geo;

  auto base_cover = [&](const VertexSet& part) {
    if (grid) return restrict_cover(brick_cover(X, opt.D), part);
    return restrict_cover(tight_cover(X, geo, part.front(), opt.D, opt.D).cover, part);
  };

  if (res.profile.xi <= 1) {
    res.cover = base_cover(all_vertices(X));
    res.stages.push_back({{"stage", "base"}, {"construction", res.cover.provenance}});
  } else {
    std::vector<Domain> U = h.index.minimal_elements();
    FactoredSpace hat = factor(h, U);
    res.stages.push_back({{"stage", "factor"}, {"domains", U.size()}, {"cone_edges", hat.cone_edges}});
    Cover ycover = tight_cover(hat.graph, geo, 0, opt.D, opt.D).cover;
    res.stages.push_back({{"stage", "hat_cover"}, {"sets", ycover.set_count()}, {"families", ycover.families.size()}});

    std::vector<Cover> fibers;
    nlohmann::json hulls = nlohmann::json::array();
    for (const auto& fam : ycover.families)
      for (const auto& V : fam) {
        if (hulls.size() < 2) {
          Hull hl = build_hull(h, V.front(), set_diameter(hat.graph, V));
          hulls.push_back({{"steps", hl.steps},
                           {"size", hl.A.size()},
                           {"preimage_inside", set_difference(V, hl.A).empty()},
                           {"claims", hl.claims}});
        }
        fibers.push_back(base_cover(V));
      }
    res.stages.push_back({{"stage", "hulls"}, {"checked", hulls}});
    std::vector<Vertex> psi(X.size());
    std::iota(psi.begin(), psi.end(), 0);
    CombineResult comb = fibration_combine(X, hat.graph, psi, ycover, fibers, Length::units(1));
    res.stages.push_back({{"stage", "fibration"}, {"ok", comb.ok}, {"reason", comb.reason}, {"witness", comb.witness}});
    if (!comb.ok) {
      res.ok = false;
      res.failed_stage = "fibration";
      return res;
    }
    res.cover = std::move(comb.cover);
  }
  res.verdict = verify_cover(X, res.cover, opt.D);
  res.cover.B = res.verdict.B;
  res.half = multiplicity(X, res.cover, half_floor(opt.D));
  res.stages.push_back({{"stage", "verify"},
                        {"ok", res.verdict.ok},
                        {"B", res.verdict.B},
                        {"families", res.cover.families.size()},
                        {"half_multiplicity", res.half.m}});
  if (!res.verdict.ok) {
    res.ok = false;
    res.failed_stage = "verify";
  } else if (res.half.m > res.cover.families.size()) {
    res.ok = false;
    res.failed_stage = "multiplicity";
  }
  return res;
}

nlohmann::json cover_to_json(const FiniteMetricGraph& X, const Cover& c) {
  nlohmann::json fams = nlohmann::json::array();
  for (const auto& f : c.families) {
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& s : f) {
      nlohmann::json ids = nlohmann::json::array();
      for (Vertex v : s) ids.push_back(X.id(v));
      sets.push_back(std::move(ids));
    }
    fams.push_back(std::move(sets));
  }
  nlohmann::json j = {{"D", c.D}, {"families", std::move(fams)}, {"provenance", c.provenance}};
  if (c.B) j["B"] = *c.B;
  return j;
}

Cover cover_from_json(const FiniteMetricGraph& X, const nlohmann::json& j) {
  Cover c;
  try {
    c.D = j.at("D").get<Length>();
    if (j.contains("B")) c.B = j.at("B").get<Length>();
    if (j.contains("provenance")) c.provenance = j.at("provenance").get<std::vector<std::string>>();
    for (const auto& f : j.at("families")) {
      std::vector<VertexSet> fam;
      for (const auto& s : f) {
        VertexSet vs;
        for (const auto& id : s) vs.push_back(X.at(id.get<std::string>()));
        fam.push_back(normalized(std::move(vs)));
      }
      c.families.push_back(std::move(fam));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cover: ") + e.what());
  }
  return c;
}

nlohmann::json certificate_to_json(const FiniteMetricGraph& X, const AsdimCertificate& a) {
  nlohmann::json j = a.extra;
  j["cover"] = cover_to_json(X, a.cover);
  j["scale"] = a.scale;
  j["bound"] = a.bound;
  j["multiplicity"] = {{"radius", half_floor(a.scale)}, {"m", a.mult.m},
                       {"center", a.mult.center >= 0 ? nlohmann::json(X.id(a.mult.center)) : nlohmann::json()}};
  return j;
}

nlohmann::json to_json(const LevelProfile& p, const DomainIndex& d) {
  nlohmann::json levels = nlohmann::json::object();
  for (std::size_t u = 0; u < d.size(); ++u) levels[d.name(static_cast<Domain>(u))] = p.level[u];
  nlohmann::json P = nlohmann::json::object();
  for (auto [l, v] : p.P) P[std::to_string(l)] = v;
  return {{"levels", levels}, {"xi", p.xi}, {"P", P}};
}

}  // namespace hhs
