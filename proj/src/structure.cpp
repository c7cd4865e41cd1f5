#include "hhs/structure.hpp"

#include <algorithm>
#include <functional>

#include "hhs/errors.hpp"
#include "hhs/metric.hpp"

namespace hhs {

DomainIndex::DomainIndex(std::vector<std::string> names) : names_(std::move(names)) {
  const std::size_t n = names_.size();
  nest_.assign(n * n, 0);
  orth_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!lookup_.emplace(names_[i], static_cast<Domain>(i)).second)
      throw StructuralError("duplicate domain name '" + names_[i] + "'");
    nest_[i * n + i] = 1;
  }
}

std::optional<Domain> DomainIndex::find(const std::string& name) const {
  auto it = lookup_.find(name);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Domain DomainIndex::at(const std::string& name) const {
  auto d = find(name);
  if (!d) throw ParseError("unknown domain '" + name + "'");
  return *d;
}

Relation DomainIndex::relation(Domain u, Domain v) const {
  if (u == v) return Relation::Equal;
  if (nested(u, v)) return Relation::Nested;
  if (nested(v, u)) return Relation::Contains;
  if (orthogonal(u, v)) return Relation::Orthogonal;
  return Relation::Transverse;
}

std::vector<Domain> DomainIndex::maximal_elements() const {
  std::vector<Domain> out;
  for (std::size_t u = 0; u < size(); ++u) {
    bool maximal = true;
    for (std::size_t v = 0; v < size() && maximal; ++v)
      if (u != v && proper_nested(static_cast<Domain>(u), static_cast<Domain>(v))) maximal = false;
    if (maximal) out.push_back(static_cast<Domain>(u));
  }
  return out;
}

std::optional<Domain> DomainIndex::top() const {
  auto m = maximal_elements();
  if (m.size() != 1) return std::nullopt;
  return m[0];
}

std::vector<Domain> DomainIndex::nested_in(Domain w) const {
  std::vector<Domain> out;
  for (std::size_t u = 0; u < size(); ++u)
    if (nested(static_cast<Domain>(u), w)) out.push_back(static_cast<Domain>(u));
  return out;
}

std::vector<Domain> DomainIndex::minimal_elements() const {
  std::vector<Domain> out;
  for (std::size_t u = 0; u < size(); ++u) {
    bool minimal = true;
    for (std::size_t v = 0; v < size() && minimal; ++v)
      if (u != v && proper_nested(static_cast<Domain>(v), static_cast<Domain>(u))) minimal = false;
    if (minimal) out.push_back(static_cast<Domain>(u));
  }
  return out;
}

std::vector<int> DomainIndex::levels() const {
  const std::size_t n = size();
  std::vector<int> lv(n, 0);
  std::vector<char> busy(n, 0);
  std::function<int(std::size_t)> rec = [&](std::size_t u) -> int {
    if (lv[u]) return lv[u];
    if (busy[u]) throw StructuralError("nesting relation has a cycle at '" + names_[u] + "'");
    busy[u] = 1;
    int best = 0;
    for (std::size_t v = 0; v < n; ++v)
      if (v != u && nest_[v * n + u] && !nest_[u * n + v]) best = std::max(best, rec(v));
    busy[u] = 0;
    return lv[u] = best + 1;
  };
  for (std::size_t u = 0; u < n; ++u) rec(u);
  return lv;
}

int DomainIndex::longest_chain() const {
  if (size() == 0) return 0;
  auto lv = levels();
  return *std::max_element(lv.begin(), lv.end());
}

std::optional<Length> theta_at(const ThetaTable& t, std::int64_t kappa) {
  auto it = t.lower_bound(kappa);
  if (it == t.end()) return std::nullopt;
  return it->second;
}

const VertexSet& HierarchicalStructure::rho(Domain u, Domain v) const {
  auto it = rho_set.find({u, v});
  if (it == rho_set.end())
    throw StructuralError("missing rho entry (" + index.name(u) + ", " + index.name(v) + ")");
  return it->second;
}

const std::vector<VertexSet>& HierarchicalStructure::rho_down(Domain w, Domain v) const {
  auto it = rho_map.find({w, v});
  if (it == rho_map.end())
    throw StructuralError("missing rho map (" + index.name(w) + " -> " + index.name(v) + ")");
  return it->second;
}

VertexSet HierarchicalStructure::rho_image(Domain w, Domain v, const VertexSet& s) const {
  const auto& m = rho_down(w, v);
  VertexSet out;
  for (Vertex x : s) out.insert(out.end(), m.at(static_cast<std::size_t>(x)).begin(), m.at(static_cast<std::size_t>(x)).end());
  return normalized(std::move(out));
}

Length HierarchicalStructure::du(Domain u, Vertex x, Vertex y) const {
  return set_distance(space(u), pi(u, x), pi(u, y));
}

Length HierarchicalStructure::du_sets(Domain u, const VertexSet& a, const VertexSet& b) const {
  return set_distance(space(u), a, b);
}

Domain HierarchicalStructure::top() const {
  auto t = index.top();
  if (!t) throw StructuralError("no unique maximal domain");
  return *t;
}

std::optional<std::string> validate_structure(const HierarchicalStructure& h) {
  const std::size_t n = h.domain_count();
  const std::size_t nx = h.ambient.size();
  if (h.spaces.size() != n || h.proj.size() != n || h.hyperbolic.size() != n || h.parallel_copies.size() != n)
    return "per-domain tables do not match the domain count";
  auto in_space = [&](Domain u, const VertexSet& s) {
    for (Vertex v : s)
      if (v < 0 || static_cast<std::size_t>(v) >= h.space(u).size()) return false;
    return true;
  };
  for (std::size_t u = 0; u < n; ++u) {
    Domain U = static_cast<Domain>(u);
    if (h.proj[u].size() != nx) return "projection table for '" + h.index.name(U) + "' has wrong size";
    for (std::size_t x = 0; x < nx; ++x)
      if (h.proj[u][x].empty() || !in_space(U, h.proj[u][x]))
        return "empty or invalid projection of '" + h.ambient.id(static_cast<Vertex>(x)) + "' to '" + h.index.name(U) + "'";
    if (h.parallel_copies[u].empty()) return "no parallel copies recorded for '" + h.index.name(U) + "'";
    for (const auto& c : h.parallel_copies[u])
      if (c.empty()) return "empty parallel copy for '" + h.index.name(U) + "'";
  }
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      Domain U = static_cast<Domain>(u), V = static_cast<Domain>(v);
      if (u == v) continue;
      if (h.index.proper_nested(U, V) || h.index.transverse(U, V)) {
        auto it = h.rho_set.find({U, V});
        if (it == h.rho_set.end() || it->second.empty())
          return "missing rho entry (" + h.index.name(U) + ", " + h.index.name(V) + ")";
        if (!in_space(V, it->second)) return "rho entry out of range (" + h.index.name(U) + ", " + h.index.name(V) + ")";
      }
      if (h.index.proper_nested(V, U)) {
        auto it = h.rho_map.find({U, V});
        if (it == h.rho_map.end())
          return "missing rho map (" + h.index.name(U) + " -> " + h.index.name(V) + ")";
        if (it->second.size() != h.space(U).size())
          return "rho map (" + h.index.name(U) + " -> " + h.index.name(V) + ") has wrong size";
        for (const auto& s : it->second)
          if (s.empty() || !in_space(V, s))
            return "rho map (" + h.index.name(U) + " -> " + h.index.name(V) + ") has an empty or invalid value";
      }
    }
  return std::nullopt;
}

// ---- JSON ----

namespace {

nlohmann::json ids(const FiniteMetricGraph& g, const VertexSet& s) {
  nlohmann::json a = nlohmann::json::array();
  for (Vertex v : s) a.push_back(g.id(v));
  return a;
}

VertexSet parse_ids(const FiniteMetricGraph& g, const nlohmann::json& a, const std::string& where) {
  if (!a.is_array()) throw ParseError(where + ": expected an array of vertex ids");
  VertexSet s;
  for (const auto& x : a) {
    std::string id = x.is_string() ? x.get<std::string>() : x.dump();
    auto v = g.find(id);
    if (!v) throw ParseError(where + ": unknown vertex '" + id + "'");
    s.push_back(*v);
  }
  return normalized(std::move(s));
}

nlohmann::json theta_json(const ThetaTable& t) {
  nlohmann::json j = nlohmann::json::object();
  for (auto& [k, v] : t) j[std::to_string(k)] = v;
  return j;
}

ThetaTable theta_parse(const nlohmann::json& j) {
  ThetaTable t;
  for (auto it = j.begin(); it != j.end(); ++it) t[std::stoll(it.key())] = it.value().get<Length>();
  return t;
}

}  // namespace

nlohmann::json constants_to_json(const ConstantsBundle& c) {
  return {{"proj_diam", c.proj_diam}, {"lipschitz", c.lipschitz}, {"kappa0", c.kappa0},
          {"kappa1", c.kappa1},       {"E", c.E},                 {"lambda", c.lambda},
          {"alpha", c.alpha},         {"complexity", c.complexity}, {"delta", c.delta},
          {"theta_u", theta_json(c.theta_u)}, {"theta_realize", theta_json(c.theta_realize)}};
}

ConstantsBundle constants_from_json(const nlohmann::json& j) {
  ConstantsBundle c;
  auto get = [&](const char* k, Length& dst) {
    if (j.contains(k)) dst = j.at(k).get<Length>();
  };
  get("proj_diam", c.proj_diam);
  get("lipschitz", c.lipschitz);
  get("kappa0", c.kappa0);
  get("kappa1", c.kappa1);
  get("E", c.E);
  get("lambda", c.lambda);
  get("alpha", c.alpha);
  get("delta", c.delta);
  if (j.contains("complexity")) c.complexity = j.at("complexity").get<int>();
  if (j.contains("theta_u")) c.theta_u = theta_parse(j.at("theta_u"));
  if (j.contains("theta_realize")) c.theta_realize = theta_parse(j.at("theta_realize"));
  return c;
}

nlohmann::json structure_to_json(const HierarchicalStructure& h) {
  nlohmann::json j;
  j["format"] = "hhs-structure";
  j["name"] = h.name;
  j["ambient"] = graph_to_json(h.ambient);
  nlohmann::json doms = nlohmann::json::array();
  for (std::size_t u = 0; u < h.domain_count(); ++u) {
    Domain U = static_cast<Domain>(u);
    nlohmann::json d;
    d["name"] = h.index.name(U);
    d["hyperbolic"] = h.hyperbolic[u] != 0;
    d["space"] = graph_to_json(h.space(U));
    nlohmann::json p = nlohmann::json::object();
    for (std::size_t x = 0; x < h.ambient.size(); ++x)
      p[h.ambient.id(static_cast<Vertex>(x))] = ids(h.space(U), h.proj[u][x]);
    d["proj"] = p;
    nlohmann::json pc = nlohmann::json::array();
    for (const auto& c : h.parallel_copies[u]) pc.push_back(ids(h.ambient, c));
    d["parallel_copies"] = pc;
    doms.push_back(d);
  }
  j["domains"] = doms;
  nlohmann::json nest = nlohmann::json::array(), orth = nlohmann::json::array();
  for (std::size_t u = 0; u < h.domain_count(); ++u)
    for (std::size_t v = 0; v < h.domain_count(); ++v) {
      Domain U = static_cast<Domain>(u), V = static_cast<Domain>(v);
      if (u != v && h.index.nested(U, V)) nest.push_back({h.index.name(U), h.index.name(V)});
      if (h.index.orthogonal(U, V)) orth.push_back({h.index.name(U), h.index.name(V)});
    }
  j["nesting"] = nest;
  j["orthogonal"] = orth;
  nlohmann::json rho = nlohmann::json::array();
  for (const auto& [k, s] : h.rho_set)
    rho.push_back({{"from", h.index.name(k.first)}, {"to", h.index.name(k.second)}, {"set", ids(h.space(k.second), s)}});
  j["rho"] = rho;
  nlohmann::json maps = nlohmann::json::array();
  for (const auto& [k, m] : h.rho_map) {
    nlohmann::json mm = nlohmann::json::object();
    for (std::size_t w = 0; w < m.size(); ++w) mm[h.space(k.first).id(static_cast<Vertex>(w))] = ids(h.space(k.second), m[w]);
    maps.push_back({{"from", h.index.name(k.first)}, {"to", h.index.name(k.second)}, {"map", mm}});
  }
  j["rho_maps"] = maps;
  j["constants"] = constants_to_json(h.constants);
  j["meta"] = h.meta;
  return j;
}

HierarchicalStructure structure_from_json(const nlohmann::json& j) {
  try {
    HierarchicalStructure h;
    if (!j.is_object()) throw ParseError("structure: expected a JSON object");
    h.name = j.value("name", std::string());
    h.ambient = graph_from_json(j.at("ambient"));
    std::vector<std::string> names;
    for (const auto& d : j.at("domains")) names.push_back(d.at("name").get<std::string>());
    h.index = DomainIndex(names);
    const std::size_t n = names.size();
    h.spaces.resize(n);
    h.hyperbolic.assign(n, 1);
    h.proj.assign(n, std::vector<VertexSet>(h.ambient.size()));
    h.parallel_copies.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
      const auto& d = j.at("domains")[u];
      h.spaces[u] = graph_from_json(d.at("space"));
      h.hyperbolic[u] = d.value("hyperbolic", true);
      const auto& p = d.at("proj");
      for (auto it = p.begin(); it != p.end(); ++it)
        h.proj[u][static_cast<std::size_t>(h.ambient.at(it.key()))] =
            parse_ids(h.spaces[u], it.value(), "proj of '" + names[u] + "'");
      if (d.contains("parallel_copies"))
        for (const auto& c : d.at("parallel_copies"))
          h.parallel_copies[u].push_back(parse_ids(h.ambient, c, "parallel copy of '" + names[u] + "'"));
    }
    for (const auto& e : j.value("nesting", nlohmann::json::array()))
      h.index.set_nested(h.index.at(e.at(0).get<std::string>()), h.index.at(e.at(1).get<std::string>()));
    for (const auto& e : j.value("orthogonal", nlohmann::json::array()))
      h.index.set_orthogonal(h.index.at(e.at(0).get<std::string>()), h.index.at(e.at(1).get<std::string>()));
    for (const auto& r : j.value("rho", nlohmann::json::array())) {
      Domain U = h.index.at(r.at("from").get<std::string>()), V = h.index.at(r.at("to").get<std::string>());
      h.rho_set[{U, V}] = parse_ids(h.space(V), r.at("set"), "rho (" + names[U] + ", " + names[V] + ")");
    }
    for (const auto& r : j.value("rho_maps", nlohmann::json::array())) {
      Domain W = h.index.at(r.at("from").get<std::string>()), V = h.index.at(r.at("to").get<std::string>());
      std::vector<VertexSet> m(h.space(W).size());
      const auto& mm = r.at("map");
      for (auto it = mm.begin(); it != mm.end(); ++it)
        m[static_cast<std::size_t>(h.space(W).at(it.key()))] =
            parse_ids(h.space(V), it.value(), "rho map (" + names[W] + " -> " + names[V] + ")");
      h.rho_map[{W, V}] = std::move(m);
    }
    if (j.contains("constants")) h.constants = constants_from_json(j.at("constants"));
    if (j.contains("meta")) h.meta = j.at("meta");
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("structure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("structure: ") + e.what());
  }
}

}  // namespace hhs
