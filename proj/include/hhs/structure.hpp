#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hhs/graph.hpp"
#include "hhs/length.hpp"

namespace hhs {

using Domain = int;

enum class Relation { Equal, Nested, Contains, Orthogonal, Transverse };

// Index set with nesting (reflexive) and orthogonality, stored as dense matrices.
class DomainIndex {
 public:
  DomainIndex() = default;
  explicit DomainIndex(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Domain u) const { return names_.at(static_cast<std::size_t>(u)); }
  std::optional<Domain> find(const std::string& name) const;
  Domain at(const std::string& name) const;

  bool nested(Domain u, Domain v) const { return nest_[idx(u, v)] != 0; }  // u ⊑ v
  bool proper_nested(Domain u, Domain v) const { return u != v && nested(u, v); }
  bool orthogonal(Domain u, Domain v) const { return orth_[idx(u, v)] != 0; }
  bool transverse(Domain u, Domain v) const {
    return u != v && !nested(u, v) && !nested(v, u) && !orthogonal(u, v);
  }
  Relation relation(Domain u, Domain v) const;

  void set_nested(Domain u, Domain v, bool on = true) { nest_[idx(u, v)] = on; }
  void set_orthogonal(Domain u, Domain v, bool on = true) { orth_[idx(u, v)] = on; }
  void set_orthogonal_sym(Domain u, Domain v, bool on = true) {
    set_orthogonal(u, v, on);
    set_orthogonal(v, u, on);
  }

  std::vector<Domain> maximal_elements() const;
  std::optional<Domain> top() const;  // the unique maximal element
  std::vector<Domain> nested_in(Domain w) const;  // 𝔖_W, includes w
  std::vector<Domain> minimal_elements() const;
  int longest_chain() const;
  // level 1 for minimal domains, else 1 + max level of proper subdomains
  std::vector<int> levels() const;

 private:
  std::size_t idx(Domain u, Domain v) const { return static_cast<std::size_t>(u) * names_.size() + static_cast<std::size_t>(v); }
  std::vector<std::string> names_;
  std::map<std::string, Domain> lookup_;
  std::vector<char> nest_, orth_;
};

using ThetaTable = std::map<std::int64_t, Length>;  // κ (whole units) → θ(κ)

struct ConstantsBundle {
  Length proj_diam;
  Length lipschitz = Length::units(1);
  Length kappa0;
  Length kappa1;
  Length E = Length::units(1);
  Length lambda = Length::units(1);
  Length alpha;
  int complexity = 1;
  Length delta;
  ThetaTable theta_u;
  ThetaTable theta_realize;
};

// Value of a table at κ: the entry at the smallest recorded key ≥ κ.
std::optional<Length> theta_at(const ThetaTable& t, std::int64_t kappa);

struct HierarchicalStructure {
  std::string name;
  FiniteMetricGraph ambient;
  DomainIndex index;
  std::vector<FiniteMetricGraph> spaces;
  std::vector<char> hyperbolic;
  std::vector<std::vector<VertexSet>> proj;  // proj[U][x]
  std::map<std::pair<Domain, Domain>, VertexSet> rho_set;  // (U,V) → ρ^U_V ⊆ CV
  std::map<std::pair<Domain, Domain>, std::vector<VertexSet>> rho_map;  // (W,V), V ⊊ W → per CW vertex
  std::vector<std::vector<VertexSet>> parallel_copies;
  ConstantsBundle constants;
  nlohmann::json meta = nlohmann::json::object();

  std::size_t domain_count() const { return index.size(); }
  const FiniteMetricGraph& space(Domain u) const { return spaces.at(static_cast<std::size_t>(u)); }
  const VertexSet& pi(Domain u, Vertex x) const { return proj[static_cast<std::size_t>(u)][static_cast<std::size_t>(x)]; }
  const VertexSet& rho(Domain u, Domain v) const;  // throws StructuralError naming the pair
  const std::vector<VertexSet>& rho_down(Domain w, Domain v) const;
  VertexSet rho_image(Domain w, Domain v, const VertexSet& s) const;
  // d_U(x,y) = set distance between π_U(x) and π_U(y)
  Length du(Domain u, Vertex x, Vertex y) const;
  Length du_sets(Domain u, const VertexSet& a, const VertexSet& b) const;
  Domain top() const;
};

// Reports a structural problem (missing ρ entry, empty projection, size mismatch) or nothing.
std::optional<std::string> validate_structure(const HierarchicalStructure& h);

nlohmann::json structure_to_json(const HierarchicalStructure& h);
HierarchicalStructure structure_from_json(const nlohmann::json& j);
nlohmann::json constants_to_json(const ConstantsBundle& c);
ConstantsBundle constants_from_json(const nlohmann::json& j);

}  // namespace hhs
