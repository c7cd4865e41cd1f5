#include "hhs/instances.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <unordered_map>

#include "hhs/errors.hpp"
#include "hhs/free_group.hpp"
#include "hhs/metric.hpp"
#include "hhs/rng.hpp"

namespace hhs {

std::size_t vertex_budget() {
  if (const char* e = std::getenv("HHS_BUDGET")) {
    try {
      long long v = std::stoll(e);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return 500000;
}

namespace {

void require_budget(std::size_t n, const std::string& what) {
  if (n > vertex_budget())
    throw BudgetError(what + ": " + std::to_string(n) + " vertices exceeds the budget of " + std::to_string(vertex_budget()));
}

ThetaTable linear_theta(std::int64_t slope) {
  ThetaTable t;
  for (std::int64_t k = 0; k <= 32; ++k) t[k] = Length::units(slope * k);
  return t;
}

FiniteMetricGraph point_space() {
  GraphBuilder b;
  b.add_vertex("*");
  return b.build();
}

std::string join(const std::vector<int>& v, char sep = ',') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s.push_back(sep);
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

HierarchicalStructure grid_instance(const GridSpec& spec) {
  const std::size_t k = spec.dims.size();
  if (k == 0) throw std::invalid_argument("grid needs at least one coordinate");
  if (k > 12) throw BudgetError("grid: too many coordinates");
  std::size_t n = 1;
  for (int d : spec.dims) {
    if (d < 1) throw std::invalid_argument("grid side lengths must be positive");
    n *= static_cast<std::size_t>(d);
    require_budget(n, "grid");
  }
  HierarchicalStructure h;
  h.name = "grid(" + join(spec.dims) + ")";
  h.meta = {{"kind", "grid"}, {"dims", spec.dims}};

  // ambient: mixed-radix enumeration, last coordinate fastest
  std::vector<std::vector<int>> coords(n, std::vector<int>(k));
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t r = v;
    for (std::size_t i = k; i-- > 0;) {
      coords[v][i] = static_cast<int>(r % static_cast<std::size_t>(spec.dims[i]));
      r /= static_cast<std::size_t>(spec.dims[i]);
    }
  }
  std::vector<std::size_t> stride(k, 1);
  for (std::size_t i = k - 1; i-- > 0;) stride[i] = stride[i + 1] * static_cast<std::size_t>(spec.dims[i + 1]);
  GraphBuilder ab;
  for (std::size_t v = 0; v < n; ++v) ab.add_vertex(join(coords[v]));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t i = 0; i < k; ++i)
      if (coords[v][i] + 1 < spec.dims[i]) ab.add_edge(static_cast<Vertex>(v), static_cast<Vertex>(v + stride[i]));
  h.ambient = ab.build();

  // domains: nonempty subsets by size, then lexicographically
  std::vector<std::vector<int>> subsets;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<int> s;
    for (std::size_t i = 0; i < k; ++i)
      if (mask >> i & 1) s.push_back(static_cast<int>(i + 1));
    subsets.push_back(s);
  }
  std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<std::string> names;
  for (const auto& s : subsets) names.push_back("{" + join(s) + "}");
  h.index = DomainIndex(names);
  const std::size_t nd = subsets.size();
  auto subset_of = [&](std::size_t a, std::size_t b) {
    return std::includes(subsets[b].begin(), subsets[b].end(), subsets[a].begin(), subsets[a].end());
  };
  auto disjoint = [&](std::size_t a, std::size_t b) {
    std::vector<int> c;
    std::set_intersection(subsets[a].begin(), subsets[a].end(), subsets[b].begin(), subsets[b].end(), std::back_inserter(c));
    return c.empty();
  };
  for (std::size_t a = 0; a < nd; ++a)
    for (std::size_t b = 0; b < nd; ++b) {
      if (subset_of(a, b)) h.index.set_nested(static_cast<Domain>(a), static_cast<Domain>(b));
      if (disjoint(a, b)) h.index.set_orthogonal(static_cast<Domain>(a), static_cast<Domain>(b));
    }

  h.spaces.resize(nd);
  h.hyperbolic.assign(nd, 1);
  h.proj.assign(nd, std::vector<VertexSet>(n));
  h.parallel_copies.resize(nd);
  for (std::size_t u = 0; u < nd; ++u) {
    if (subsets[u].size() == 1) {
      int axis = subsets[u][0] - 1;
      GraphBuilder sb;
      for (int i = 0; i < spec.dims[static_cast<std::size_t>(axis)]; ++i) sb.add_vertex(std::to_string(i));
      for (int i = 0; i + 1 < spec.dims[static_cast<std::size_t>(axis)]; ++i) sb.add_edge(i, i + 1);
      h.spaces[u] = sb.build();
      for (std::size_t v = 0; v < n; ++v) h.proj[u][v] = {coords[v][static_cast<std::size_t>(axis)]};
    } else {
      h.spaces[u] = point_space();
      for (std::size_t v = 0; v < n; ++v) h.proj[u][v] = {0};
    }
    // parallel copies: fix the coordinates outside the subset
    std::map<std::vector<int>, VertexSet> copies;
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<int> key;
      for (std::size_t i = 0; i < k; ++i)
        if (!std::binary_search(subsets[u].begin(), subsets[u].end(), static_cast<int>(i + 1))) key.push_back(coords[v][i]);
      copies[key].push_back(static_cast<Vertex>(v));
    }
    for (auto& [key, s] : copies) h.parallel_copies[u].push_back(s);
  }
  for (std::size_t a = 0; a < nd; ++a)
    for (std::size_t b = 0; b < nd; ++b) {
      Domain A = static_cast<Domain>(a), B = static_cast<Domain>(b);
      if (h.index.proper_nested(A, B) || h.index.transverse(A, B)) h.rho_set[{A, B}] = {0};
      if (h.index.proper_nested(B, A)) h.rho_map[{A, B}] = std::vector<VertexSet>(h.spaces[a].size(), VertexSet{0});
    }
  auto& c = h.constants;
  c.proj_diam = Length();
  c.lipschitz = Length::units(1);
  c.kappa0 = Length();
  c.kappa1 = Length();
  c.E = Length::units(1);
  c.lambda = Length::units(static_cast<std::int64_t>(std::max<std::size_t>(1, k)));
  c.alpha = Length();
  c.complexity = static_cast<int>(k);
  c.delta = Length();
  c.theta_u = linear_theta(static_cast<std::int64_t>(k));
  c.theta_realize = linear_theta(0);
  return h;
}

HierarchicalStructure tree_instance(const FiniteMetricGraph& tree) {
  if (!tree.connected() || tree.edge_count() + 1 != std::max<std::size_t>(tree.size(), 1))
    throw StructuralError("tree_instance: input is not a tree");
  require_budget(tree.size(), "tree");
  HierarchicalStructure h;
  h.name = "tree";
  h.meta = {{"kind", "tree"}};
  h.ambient = tree;
  h.index = DomainIndex({"S"});
  h.spaces = {tree};
  h.hyperbolic = {1};
  h.proj.assign(1, std::vector<VertexSet>(tree.size()));
  for (std::size_t v = 0; v < tree.size(); ++v) h.proj[0][v] = {static_cast<Vertex>(v)};
  h.parallel_copies = {{all_vertices(tree)}};
  auto& c = h.constants;
  c.lipschitz = Length::units(1);
  c.E = Length::units(1);
  c.lambda = Length::units(1);
  c.complexity = 1;
  c.theta_u = linear_theta(1);
  c.theta_realize = linear_theta(0);
  return h;
}

HierarchicalStructure product_instance(const HierarchicalStructure& A, const HierarchicalStructure& B) {
  const std::size_t na = A.ambient.size(), nb = B.ambient.size();
  require_budget(na * nb, "product");
  HierarchicalStructure h;
  h.name = "(" + A.name + ")x(" + B.name + ")";
  h.meta = {{"kind", "product"}, {"left", A.meta}, {"right", B.meta}};
  GraphBuilder gb;
  for (std::size_t x = 0; x < na; ++x)
    for (std::size_t y = 0; y < nb; ++y) gb.add_vertex(A.ambient.id(static_cast<Vertex>(x)) + "|" + B.ambient.id(static_cast<Vertex>(y)));
  auto at = [&](std::size_t x, std::size_t y) { return static_cast<Vertex>(x * nb + y); };
  for (std::size_t x = 0; x < na; ++x)
    for (const Arc& e : A.ambient.neighbors(static_cast<Vertex>(x)))
      if (static_cast<std::size_t>(e.to) > x)
        for (std::size_t y = 0; y < nb; ++y) gb.add_edge(at(x, y), at(static_cast<std::size_t>(e.to), y), Length::from_ticks(e.w));
  for (std::size_t y = 0; y < nb; ++y)
    for (const Arc& e : B.ambient.neighbors(static_cast<Vertex>(y)))
      if (static_cast<std::size_t>(e.to) > y)
        for (std::size_t x = 0; x < na; ++x) gb.add_edge(at(x, y), at(x, static_cast<std::size_t>(e.to)), Length::from_ticks(e.w));
  h.ambient = gb.build();

  const std::size_t da = A.domain_count(), db = B.domain_count();
  std::vector<std::string> names;
  for (std::size_t u = 0; u < da; ++u) names.push_back("L." + A.index.name(static_cast<Domain>(u)));
  for (std::size_t u = 0; u < db; ++u) names.push_back("R." + B.index.name(static_cast<Domain>(u)));
  names.push_back("S");
  h.index = DomainIndex(names);
  const Domain top = static_cast<Domain>(da + db);
  auto L = [&](std::size_t u) { return static_cast<Domain>(u); };
  auto R = [&](std::size_t u) { return static_cast<Domain>(da + u); };
  for (std::size_t u = 0; u < da; ++u) {
    for (std::size_t v = 0; v < da; ++v) {
      h.index.set_nested(L(u), L(v), A.index.nested(static_cast<Domain>(u), static_cast<Domain>(v)));
      h.index.set_orthogonal(L(u), L(v), A.index.orthogonal(static_cast<Domain>(u), static_cast<Domain>(v)));
    }
    for (std::size_t v = 0; v < db; ++v) h.index.set_orthogonal_sym(L(u), R(v));
    h.index.set_nested(L(u), top);
  }
  for (std::size_t u = 0; u < db; ++u) {
    for (std::size_t v = 0; v < db; ++v) {
      h.index.set_nested(R(u), R(v), B.index.nested(static_cast<Domain>(u), static_cast<Domain>(v)));
      h.index.set_orthogonal(R(u), R(v), B.index.orthogonal(static_cast<Domain>(u), static_cast<Domain>(v)));
    }
    h.index.set_nested(R(u), top);
  }
  const std::size_t nd = da + db + 1;
  h.spaces.resize(nd);
  h.hyperbolic.assign(nd, 1);
  h.proj.assign(nd, std::vector<VertexSet>(na * nb));
  h.parallel_copies.resize(nd);
  for (std::size_t u = 0; u < da; ++u) {
    h.spaces[u] = A.spaces[u];
    h.hyperbolic[u] = A.hyperbolic[u];
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t y = 0; y < nb; ++y) h.proj[u][static_cast<std::size_t>(at(x, y))] = A.proj[u][x];
    for (const auto& c : A.parallel_copies[u])
      for (std::size_t y = 0; y < nb; ++y) {
        VertexSet s;
        for (Vertex x : c) s.push_back(at(static_cast<std::size_t>(x), y));
        h.parallel_copies[u].push_back(normalized(s));
      }
  }
  for (std::size_t u = 0; u < db; ++u) {
    h.spaces[da + u] = B.spaces[u];
    h.hyperbolic[da + u] = B.hyperbolic[u];
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t y = 0; y < nb; ++y) h.proj[da + u][static_cast<std::size_t>(at(x, y))] = B.proj[u][y];
    for (const auto& c : B.parallel_copies[u])
      for (std::size_t x = 0; x < na; ++x) {
        VertexSet s;
        for (Vertex y : c) s.push_back(at(x, static_cast<std::size_t>(y)));
        h.parallel_copies[da + u].push_back(normalized(s));
      }
  }
  h.spaces[nd - 1] = point_space();
  for (auto& p : h.proj[nd - 1]) p = {0};
  h.parallel_copies[nd - 1] = {all_vertices(h.ambient)};
  for (const auto& [k, s] : A.rho_set) h.rho_set[{L(static_cast<std::size_t>(k.first)), L(static_cast<std::size_t>(k.second))}] = s;
  for (const auto& [k, m] : A.rho_map) h.rho_map[{L(static_cast<std::size_t>(k.first)), L(static_cast<std::size_t>(k.second))}] = m;
  for (const auto& [k, s] : B.rho_set) h.rho_set[{R(static_cast<std::size_t>(k.first)), R(static_cast<std::size_t>(k.second))}] = s;
  for (const auto& [k, m] : B.rho_map) h.rho_map[{R(static_cast<std::size_t>(k.first)), R(static_cast<std::size_t>(k.second))}] = m;
  for (std::size_t u = 0; u + 1 < nd; ++u) {
    h.rho_set[{static_cast<Domain>(u), top}] = {0};
    h.rho_map[{top, static_cast<Domain>(u)}] = {VertexSet{0}};
  }
  const auto& ca = A.constants;
  const auto& cb = B.constants;
  auto& c = h.constants;
  c.proj_diam = max(ca.proj_diam, cb.proj_diam);
  c.lipschitz = max(ca.lipschitz, cb.lipschitz);
  c.kappa0 = max(ca.kappa0, cb.kappa0);
  c.kappa1 = max(ca.kappa1, cb.kappa1);
  c.E = max(ca.E, cb.E);
  c.lambda = max(max(ca.lambda, cb.lambda), Length::units(2));
  c.alpha = max(ca.alpha, cb.alpha);
  c.complexity = std::max(ca.complexity, cb.complexity) + 1;
  c.delta = max(ca.delta, cb.delta);
  for (std::int64_t k = 0; k <= 32; ++k) {
    auto ua = theta_at(ca.theta_u, k), ub = theta_at(cb.theta_u, k);
    if (ua && ub) c.theta_u[k] = *ua + *ub;
    auto ra = theta_at(ca.theta_realize, k), rb = theta_at(cb.theta_realize, k);
    if (ra && rb) c.theta_realize[k] = max(*ra, *rb);
  }
  return h;
}

RelativeSpec default_relative_spec() {
  RelativeSpec s;
  s.tree = binary_tree(4);
  s.attachments = {"t15", "t30"};
  s.flats = {{5, 5}, {5, 5}};
  return s;
}

RelativeSpec relative_spec_from_json(const nlohmann::json& j) {
  try {
    RelativeSpec s;
    s.tree = graph_from_json(j.at("tree"));
    for (const auto& a : j.at("attachments")) s.attachments.push_back(a.is_string() ? a.get<std::string>() : a.dump());
    for (const auto& f : j.at("flats")) s.flats.emplace_back(f.at(0).get<int>(), f.at(1).get<int>());
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("relative spec: ") + e.what());
  }
}

nlohmann::json relative_spec_to_json(const RelativeSpec& s) {
  nlohmann::json f = nlohmann::json::array();
  for (auto [a, b] : s.flats) f.push_back({a, b});
  return {{"tree", graph_to_json(s.tree)}, {"attachments", s.attachments}, {"flats", f}};
}

HierarchicalStructure relative_instance(const RelativeSpec& spec) {
  const FiniteMetricGraph& T = spec.tree;
  if (!T.connected() || T.edge_count() + 1 != std::max<std::size_t>(T.size(), 1))
    throw StructuralError("relative_instance: base is not a tree");
  if (spec.attachments.size() != spec.flats.size())
    throw StructuralError("relative_instance: one attachment vertex per flat required");
  std::vector<Vertex> attach;
  for (const auto& a : spec.attachments) attach.push_back(T.at(a));
  if (normalized(attach).size() != attach.size()) throw StructuralError("relative_instance: attachment vertices must be distinct");
  const std::size_t k = spec.flats.size();
  std::size_t total = T.size();
  for (auto [w, hgt] : spec.flats) {
    if (w < 1 || hgt < 1) throw std::invalid_argument("flat sides must be positive");
    total += static_cast<std::size_t>(w * hgt) - 1;
  }
  require_budget(total + k, "relative");

  HierarchicalStructure h;
  h.name = "relative";
  h.meta = {{"kind", "relative"}, {"attachments", spec.attachments}};
  GraphBuilder ab;
  for (std::size_t v = 0; v < T.size(); ++v) ab.add_vertex(T.id(static_cast<Vertex>(v)));
  // flat_vertex[i][a*h+b] = ambient vertex
  std::vector<std::vector<Vertex>> flat_vertex(k);
  for (std::size_t i = 0; i < k; ++i) {
    auto [w, hg] = spec.flats[i];
    flat_vertex[i].resize(static_cast<std::size_t>(w * hg));
    for (int a = 0; a < w; ++a)
      for (int b = 0; b < hg; ++b) {
        std::size_t idx = static_cast<std::size_t>(a * hg + b);
        flat_vertex[i][idx] = (a == 0 && b == 0)
                                  ? attach[i]
                                  : ab.add_vertex("F" + std::to_string(i + 1) + ":" + std::to_string(a) + "," + std::to_string(b));
      }
  }
  auto copy_tree_edges = [&](GraphBuilder& gb) {
    for (std::size_t u = 0; u < T.size(); ++u)
      for (const Arc& e : T.neighbors(static_cast<Vertex>(u)))
        if (static_cast<std::size_t>(e.to) > u) gb.add_edge(static_cast<Vertex>(u), e.to, Length::from_ticks(e.w));
    for (std::size_t i = 0; i < k; ++i) {
      auto [w, hg] = spec.flats[i];
      for (int a = 0; a < w; ++a)
        for (int b = 0; b < hg; ++b) {
          Vertex v = flat_vertex[i][static_cast<std::size_t>(a * hg + b)];
          if (a + 1 < w) gb.add_edge(v, flat_vertex[i][static_cast<std::size_t>((a + 1) * hg + b)]);
          if (b + 1 < hg) gb.add_edge(v, flat_vertex[i][static_cast<std::size_t>(a * hg + b + 1)]);
        }
    }
  };
  GraphBuilder cs = ab;
  copy_tree_edges(ab);
  h.ambient = ab.build();
  const std::size_t nx = h.ambient.size();
  copy_tree_edges(cs);
  std::vector<Vertex> hub(k);
  for (std::size_t i = 0; i < k; ++i) {
    hub[i] = cs.add_vertex("hub:F" + std::to_string(i + 1));
    for (Vertex v : flat_vertex[i]) cs.add_edge(hub[i], v, Length::ratio(1, 2));
  }
  FiniteMetricGraph CS = cs.build();

  std::vector<std::string> names{"S"};
  for (std::size_t i = 0; i < k; ++i) names.push_back("F" + std::to_string(i + 1));
  h.index = DomainIndex(names);
  for (std::size_t i = 1; i <= k; ++i) h.index.set_nested(static_cast<Domain>(i), 0);
  h.spaces.resize(k + 1);
  h.hyperbolic.assign(k + 1, 1);
  h.spaces[0] = CS;
  h.proj.assign(k + 1, std::vector<VertexSet>(nx));
  h.parallel_copies.resize(k + 1);
  for (std::size_t x = 0; x < nx; ++x) h.proj[0][x] = {static_cast<Vertex>(x)};
  h.parallel_copies[0] = {all_vertices(h.ambient)};
  std::vector<std::vector<int>> flat_index(k, std::vector<int>(nx, -1));
  for (std::size_t i = 0; i < k; ++i) {
    auto [w, hg] = spec.flats[i];
    GraphBuilder fb;
    for (int a = 0; a < w; ++a)
      for (int b = 0; b < hg; ++b) fb.add_vertex(std::to_string(a) + "," + std::to_string(b));
    for (int a = 0; a < w; ++a)
      for (int b = 0; b < hg; ++b) {
        if (a + 1 < w) fb.add_edge(a * hg + b, (a + 1) * hg + b);
        if (b + 1 < hg) fb.add_edge(a * hg + b, a * hg + b + 1);
      }
    h.spaces[i + 1] = fb.build();
    h.hyperbolic[i + 1] = 0;
    for (std::size_t idx = 0; idx < flat_vertex[i].size(); ++idx) flat_index[i][static_cast<std::size_t>(flat_vertex[i][idx])] = static_cast<int>(idx);
    for (std::size_t x = 0; x < nx; ++x) {
      int fi = flat_index[i][x];
      h.proj[i + 1][x] = {fi >= 0 ? fi : 0};
    }
    h.parallel_copies[i + 1] = {normalized(flat_vertex[i])};
    Domain F = static_cast<Domain>(i + 1);
    h.rho_set[{F, 0}] = {attach[i]};
    std::vector<VertexSet> down(CS.size());
    for (std::size_t z = 0; z < CS.size(); ++z) {
      int fi = z < nx ? flat_index[i][z] : -1;
      down[z] = {fi >= 0 ? fi : 0};
    }
    h.rho_map[{0, F}] = std::move(down);
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) h.rho_set[{static_cast<Domain>(i + 1), static_cast<Domain>(j + 1)}] = {0};
  h.constants.complexity = h.index.longest_chain();
  h.constants.theta_realize = linear_theta(2);
  for (auto& [kk, v] : h.constants.theta_realize) v = v + Length::units(2);
  h.constants = calibrate_constants(h);
  return h;
}

ConstantsBundle calibrate_constants(const HierarchicalStructure& h0, const CheckOptions& opt) {
  HierarchicalStructure h = h0;
  ConstantsBundle& c = h.constants;
  auto whole = [](Length l) { return Length::units(l.ceil_units()); };
  c.proj_diam = Length::units(1 << 30);
  c.proj_diam = whole(check_structure(h).observed);
  c.lipschitz = check_projections(h, opt).observed;
  c.kappa0 = whole(check_consistency(h).observed);
  c.kappa1 = whole(check_rho_consistency(h).observed);
  c.complexity = h.index.longest_chain();
  Length delta;
  for (std::size_t u = 0; u < h.domain_count(); ++u)
    if (h.hyperbolic[u]) delta = max(delta, gromov_delta(h.spaces[u]).delta);
  c.delta = whole(delta);
  c.alpha = whole(check_partial_realization(h, opt).observed);
  c.E = max(max(Length::units(1), c.proj_diam), max(max(c.kappa0, c.kappa1), c.delta));
  for (int it = 0; it < 64; ++it) {
    if (check_bgi(h, opt).pass && check_orth_close(h).pass) break;
    c.E += Length::units(1);
  }
  c.lambda = Length::units(1);
  for (int it = 0; it < 64; ++it) {
    CheckReport r = check_large_links(h, opt);
    if (r.pass) break;
    c.lambda = max(c.lambda + Length::units(1), whole(r.observed));
  }
  CheckOptions lad = opt;
  lad.kappa_ladder.clear();
  for (std::int64_t k = 0; k <= 32; ++k) lad.kappa_ladder.push_back(k);
  ThetaTable t = uniqueness_profile(h, lad);
  Length run;
  for (auto& [k, v] : t) {
    run = max(run, whole(v));
    c.theta_u[k] = run;
  }
  return c;
}

// ---- free groups ----

Vertex FreeBall::vertex_of(const std::string& word) const {
  auto v = find(word);
  if (!v) throw std::out_of_range("word '" + fg::id_of(word) + "' lies outside the ball");
  return *v;
}

std::optional<Vertex> FreeBall::find(const std::string& word) const { return graph.find(fg::id_of(fg::reduce(word))); }

FreeBall free_ball(const CayleyBallSpec& spec) {
  if (spec.radius < 1) throw std::invalid_argument("free_ball: radius must be at least 1");
  const std::string alpha = fg::alphabet(spec.rank);
  if (!fg::valid_word(spec.subgroup, spec.rank) || fg::reduce(spec.subgroup).empty())
    throw std::invalid_argument("free_ball: subgroup generator must be a nontrivial word in the generators");
  // size check before building
  double count = 1, layer = 2.0 * spec.rank;
  for (int r = 1; r <= spec.radius; ++r) {
    count += layer;
    layer *= 2.0 * spec.rank - 1;
    if (count > static_cast<double>(vertex_budget()))
      throw BudgetError("free_ball: ball exceeds the vertex budget of " + std::to_string(vertex_budget()));
  }
  FreeBall fb;
  fb.spec = spec;
  if (fb.spec.coset_depth < 0) fb.spec.coset_depth = spec.radius / 2;
  GraphBuilder b;
  fb.words.push_back("");
  b.add_vertex("1");
  std::vector<Vertex> parent{-1};
  for (std::size_t i = 0; i < fb.words.size(); ++i) {
    const std::string w = fb.words[i];
    if (static_cast<int>(w.size()) == spec.radius) continue;
    for (char c : alpha) {
      if (!w.empty() && w.back() == fg::inv(c)) continue;
      std::string nw = w + c;
      Vertex v = b.add_vertex(nw);
      fb.words.push_back(nw);
      b.add_edge(static_cast<Vertex>(i), v);
    }
  }
  fb.graph = b.build();

  const std::string h = fg::reduce(spec.subgroup);
  const int kmax = 2 * spec.radius / static_cast<int>(h.size()) + 2;
  std::map<Vertex, Coset> found;
  for (std::size_t g = 0; g < fb.words.size(); ++g) {
    if (static_cast<int>(fb.words[g].size()) > fb.spec.coset_depth) break;
    std::vector<std::pair<int, Vertex>> mem;
    for (int k = -kmax; k <= kmax; ++k)
      if (auto v = fb.find(fg::multiply(fb.words[g], fg::power(h, k)))) mem.emplace_back(k, *v);
    Vertex key = mem.empty() ? static_cast<Vertex>(g) : std::min_element(mem.begin(), mem.end(), [](auto& a, auto& c) { return a.second < c.second; })->second;
    if (found.count(key)) continue;
    Coset c;
    c.rep = fb.words[static_cast<std::size_t>(key)];
    GraphBuilder cb;
    for (auto [k, v] : mem) {
      c.members.push_back(v);
      cb.add_vertex(fb.graph.id(v));
    }
    for (std::size_t i = 0; i + 1 < mem.size(); ++i)
      if (mem[i + 1].first == mem[i].first + 1) cb.add_edge(static_cast<Vertex>(i), static_cast<Vertex>(i + 1));
    c.graph = cb.build();
    found.emplace(key, std::move(c));
  }
  for (auto& [k, c] : found) fb.cosets.push_back(std::move(c));
  return fb;
}

FiniteMetricGraph path_graph(int n) {
  GraphBuilder b;
  for (int i = 0; i <= n; ++i) b.add_vertex(std::to_string(i));
  for (int i = 0; i < n; ++i) b.add_edge(i, i + 1);
  return b.build();
}

FiniteMetricGraph random_tree(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random_tree: need at least one vertex");
  Rng rng(seed);
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex("t" + std::to_string(i));
  for (int i = 1; i < n; ++i) b.add_edge(i, static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(i))));
  return b.build();
}

FiniteMetricGraph binary_tree(int depth, int spacing) {
  if (depth < 0 || spacing < 1) throw std::invalid_argument("binary_tree: bad parameters");
  GraphBuilder b;
  b.add_vertex("t0");
  std::size_t nodes = (std::size_t{1} << (depth + 1)) - 1;
  require_budget(1 + (nodes - 1) * static_cast<std::size_t>(spacing), "binary tree");
  for (std::size_t i = 1; i < nodes; ++i) {
    Vertex parent = *b.find("t" + std::to_string((i - 1) / 2));
    Vertex prev = parent;
    for (int s = 1; s < spacing; ++s) {
      Vertex mid = b.add_vertex("t" + std::to_string(i) + "." + std::to_string(s));
      b.add_edge(prev, mid);
      prev = mid;
    }
    Vertex v = b.add_vertex("t" + std::to_string(i));
    b.add_edge(prev, v);
  }
  return b.build();
}

}  // namespace hhs
