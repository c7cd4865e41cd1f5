#include "hhs/hull.hpp"

#include <algorithm>
#include <functional>

#include "hhs/factored.hpp"

namespace hhs {

namespace {

std::int64_t row_min(const DistRow& row, const VertexSet& s) {
  std::int64_t m = DistRow::kFar;
  for (Vertex p : s) m = std::min(m, row[p]);
  return m;
}

VertexSet image(const HierarchicalStructure& h, Domain u, const VertexSet& Y) {
  VertexSet out;
  for (Vertex y : Y) out.insert(out.end(), h.pi(u, y).begin(), h.pi(u, y).end());
  return normalized(std::move(out));
}

struct Attempt {
  VertexSet A;
  std::vector<HullStep> trace;
  bool fixpoint = false;
  bool claims = true;
};

Attempt iterate(const HierarchicalStructure& h, const std::vector<Domain>& minimal, Vertex x0, int steps, Length M,
                const HullOptions& opt) {
  const auto& I = h.index;
  const std::size_t nd = h.domain_count();
  const std::size_t nx = h.ambient.size();
  const std::int64_t Mt = M.ticks();
  Attempt at;
  at.A = {x0};
  for (int n = 1; n <= steps; ++n) {
    HullStep st;
    st.n = n;
    const VertexSet& prev = at.A;
    VertexSet Ap = neighborhood(h.ambient, prev, opt.D.times(Length::units(10)));
    std::vector<DistRow> to_prev(nd), to_Ap(nd);
    for (std::size_t v = 0; v < nd; ++v) {
      to_prev[v] = h.space(static_cast<Domain>(v)).row_to_set(image(h, static_cast<Domain>(v), prev));
      to_Ap[v] = h.space(static_cast<Domain>(v)).row_to_set(image(h, static_cast<Domain>(v), Ap));
    }
    auto above = [&](Domain U, Domain V) { return I.transverse(U, V) || I.proper_nested(U, V); };
    std::vector<Domain> adm;
    for (Domain U : minimal) {
      bool ok = true;
      for (std::size_t v = 0; v < nd && ok; ++v)
        if (above(U, static_cast<Domain>(v))) ok = row_min(to_prev[v], h.rho(U, static_cast<Domain>(v))) <= Mt;
      if (ok) adm.push_back(U);
    }
    st.admissible = adm.size();
    std::vector<std::vector<Domain>> colls;
    std::vector<Domain> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (colls.size() >= opt.collection_budget) return;
      if (i == adm.size()) {
        colls.push_back(cur);
        return;
      }
      rec(i + 1);
      if (std::all_of(cur.begin(), cur.end(), [&](Domain c) { return I.orthogonal(c, adm[i]); })) {
        cur.push_back(adm[i]);
        rec(i + 1);
        cur.pop_back();
      }
    };
    rec(0);
    st.collections = colls.size();
    std::vector<char> in(nx, 0);
    for (Vertex v : Ap) in[static_cast<std::size_t>(v)] = 1;
    std::map<std::pair<Domain, Domain>, DistRow> rho_rows;
    for (const auto& C : colls) {
      std::vector<std::size_t> orth;
      for (std::size_t v = 0; v < nd; ++v)
        if (std::all_of(C.begin(), C.end(), [&](Domain U) { return I.orthogonal(static_cast<Domain>(v), U); })) orth.push_back(v);
      std::vector<std::pair<std::size_t, const DistRow*>> rho_c;
      for (Domain U : C)
        for (std::size_t v = 0; v < nd; ++v)
          if (above(U, static_cast<Domain>(v))) {
            auto key = std::make_pair(U, static_cast<Domain>(v));
            auto it = rho_rows.find(key);
            if (it == rho_rows.end()) it = rho_rows.emplace(key, h.space(key.second).row_to_set(h.rho(U, key.second))).first;
            rho_c.emplace_back(v, &it->second);
          }
      for (std::size_t x = 0; x < nx; ++x) {
        if (in[x]) continue;
        Vertex X = static_cast<Vertex>(x);
        bool ok = true;
        for (std::size_t v : orth)
          if (row_min(to_Ap[v], h.pi(static_cast<Domain>(v), X)) > Mt) {
            ok = false;
            break;
          }
        for (std::size_t i = 0; i < rho_c.size() && ok; ++i)
          ok = row_min(*rho_c[i].second, h.pi(static_cast<Domain>(rho_c[i].first), X)) <= Mt;
        if (ok) in[x] = 1;
      }
    }
    VertexSet next;
    for (std::size_t x = 0; x < nx; ++x)
      if (in[x]) next.push_back(static_cast<Vertex>(x));
    st.size = next.size();
    st.contains_neighborhood = std::includes(next.begin(), next.end(), Ap.begin(), Ap.end());
    for (Domain U : minimal)
      for (const auto& c : h.parallel_copies[static_cast<std::size_t>(U)]) {
        if (set_intersection(c, prev).empty()) continue;
        if (!std::includes(next.begin(), next.end(), c.begin(), c.end())) st.parallel_copies = false;
      }
    for (Domain U : adm) {
      DistRow row = h.space(U).row_to_set(image(h, U, next));
      for (std::size_t x = 0; x < nx; ++x)
        st.image_gap = max(st.image_gap, Length::from_ticks(row_min(row, h.pi(U, static_cast<Vertex>(x)))));
    }
    st.image_projection = st.image_gap <= M;
    at.claims = at.claims && st.contains_neighborhood && st.parallel_copies && st.image_projection;
    at.trace.push_back(st);
    bool same = next == at.A;
    at.A = std::move(next);
    if (same) {
      at.fixpoint = true;
      break;
    }
  }
  return at;
}

}  // namespace

Hull build_hull(const HierarchicalStructure& h, Vertex x0, Length R, const HullOptions& opt) {
  if (R < Length()) throw std::invalid_argument("build_hull: negative radius");
  std::vector<Domain> minimal = h.index.minimal_elements();
  FactoredSpace hat = factor(h, minimal);
  Hull hull;
  DistRow from = hat.graph.row(x0);
  for (std::size_t x = 0; x < h.ambient.size(); ++x)
    if (from.reachable(static_cast<Vertex>(x)) && from[static_cast<Vertex>(x)] <= R.ticks()) hull.ball.push_back(static_cast<Vertex>(x));
  const int steps = static_cast<int>(std::max<std::int64_t>(1, R.times(opt.D).times(opt.D).times(Length::units(10)).ceil_units()));
  Length M = opt.M ? *opt.M : max(max(Length::units(1), h.constants.E), max(h.constants.alpha, h.constants.kappa0));
  const int tries = opt.M ? 1 : opt.max_doublings + 1;
  for (int t = 0; t < tries; ++t) {
    hull.tried_M.push_back(M);
    Attempt a = iterate(h, minimal, x0, steps, M, opt);
    hull.A = a.A;
    hull.trace = a.trace;
    hull.fixpoint = a.fixpoint;
    hull.claims = a.claims;
    hull.M = M;
    hull.steps = static_cast<int>(a.trace.size());
    hull.ball_contained = std::includes(a.A.begin(), a.A.end(), hull.ball.begin(), hull.ball.end());
    if (hull.claims && hull.ball_contained) break;
    M = M + M;
  }
  hull.hqc = hqc_constant(h, hull.A);
  return hull;
}

nlohmann::json to_json(const HierarchicalStructure& h, const Hull& hull) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& s : hull.trace)
    trace.push_back({{"n", s.n}, {"size", s.size}, {"admissible", s.admissible}, {"collections", s.collections},
                     {"contains_neighborhood", s.contains_neighborhood}, {"parallel_copies", s.parallel_copies},
                     {"image_projection", s.image_projection}, {"image_gap", s.image_gap}});
  nlohmann::json A = nlohmann::json::array();
  for (Vertex v : hull.A) A.push_back(h.ambient.id(v));
  nlohmann::json tried = nlohmann::json::array();
  for (Length m : hull.tried_M) tried.push_back(m);
  return {{"M", hull.M}, {"tried_M", tried}, {"steps", hull.steps}, {"fixpoint", hull.fixpoint}, {"size", hull.A.size()},
          {"ball_size", hull.ball.size()}, {"ball_contained", hull.ball_contained}, {"claims", hull.claims},
          {"hqc_k0", hull.hqc.k0}, {"hqc", hull.hqc.per_domain}, {"trace", trace}, {"A", A}};
}

}  // namespace hhs
