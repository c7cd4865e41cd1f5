#pragma once

#include <vector>

#include <json.hpp>

#include "hhs/axioms.hpp"
#include "hhs/metric.hpp"
#include "hhs/structure.hpp"

namespace hhs {

// No domain outside the set nests into one inside it.
bool is_nesting_closed(const DomainIndex& d, const std::vector<Domain>& U);

struct FactoredSpace {
  std::vector<Domain> factored;
  FiniteMetricGraph graph;  // ambient plus unit cliques; same vertex order
  std::size_t cone_edges = 0;
  bool cone_product_regions = false;
  HierarchicalStructure induced;  // domains outside the factored set over the new metric
};

// Throws StructuralError for a set that is not nesting-closed, a weighted ambient,
// or a factored domain without parallel copies.
FactoredSpace factor(const HierarchicalStructure& h, std::vector<Domain> U, bool cone_product_regions = false);
std::vector<Domain> domains_from_names(const HierarchicalStructure& h, const std::string& csv);
std::vector<Domain> all_proper(const HierarchicalStructure& h);

struct FactoredCheck {
  std::vector<CheckReport> reports;
  ConstantsBundle constants;  // re-measured on the induced structure
  bool pass = true;
};
FactoredCheck check_factored_hhs(const HierarchicalStructure& h, const std::vector<Domain>& U,
                                 const CheckOptions& opt = {});
ThetaTable factored_uniqueness_profile(const HierarchicalStructure& h, const std::vector<Domain>& U,
                                       const CheckOptions& opt = {});

// Fit between d̂ over all proper domains and d_CS∘π_S.
QiFit maximal_coning_qi(const HierarchicalStructure& h, const CheckOptions& opt = {});

inline bool is_friendly(const DomainIndex& d, Domain u, Domain v) { return d.nested(u, v) || d.orthogonal(u, v); }

struct FriendshipOptions {
  std::optional<Length> gap;  // default 2α + E + κ₀
  std::size_t points_per_pair = 8;
  std::uint64_t seed = 1;
};
// For p the gate of a point of P_V into P_U and q the gate of p into P_V: each W with
// d_W(p,q) above the gap is unfriendly to both and separates ρ^U_W from ρ^V_W by more than gap - 2α.
CheckReport verify_friendship_lemmas(const HierarchicalStructure& h, const FriendshipOptions& opt = {});

}  // namespace hhs
