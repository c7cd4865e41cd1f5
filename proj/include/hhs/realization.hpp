#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "hhs/axioms.hpp"
#include "hhs/metric.hpp"
#include "hhs/structure.hpp"

namespace hhs {

// One coordinate set per domain.
struct Tuple {
  std::vector<VertexSet> b;
};

Tuple point_tuple(const HierarchicalStructure& h, Vertex x);
nlohmann::json tuple_to_json(const HierarchicalStructure& h, const Tuple& t);
// {"domain": ["id", ...] or "id"}; every domain must be present
Tuple tuple_from_json(const HierarchicalStructure& h, const nlohmann::json& j);

struct ConsistencyResult {
  bool consistent = true;
  Length worst;
  nlohmann::json witness;
};
ConsistencyResult is_consistent(const HierarchicalStructure& h, const Tuple& t, Length kappa);

struct Realization {
  Vertex point = -1;
  Length error;  // sup_V d_V(π_V x, b_V)
  std::optional<Length> theta;  // recorded θ(κ)
  bool within_contract = true;
};
// Exhaustive minimization over the ambient (or over `within`); ties go to the smaller id.
Realization realize(const HierarchicalStructure& h, const Tuple& t, Length kappa, const VertexSet* within = nullptr);
nlohmann::json to_json(const HierarchicalStructure& h, const Realization& r);

// Calls f on every tuple of single CV vertices; returns the count or throws BudgetError past `budget`.
std::size_t for_each_point_tuple(const HierarchicalStructure& h, const std::function<void(const Tuple&)>& f,
                                 std::size_t budget = 1000000);

struct HqcReport {
  Length k0;  // worst per-domain constant
  nlohmann::json per_domain = nlohmann::json::object();
};
// Hyperbolic U: quasiconvexity constant of π_U(Y); non-hyperbolic minimal U: min(onto radius, diameter).
HqcReport hqc_constant(const HierarchicalStructure& h, const VertexSet& Y);

struct Gate {
  Vertex point = -1;
  Length error;
  Tuple target;
};
// Closest-point projections in each CU, realized inside Y; ties by (error, d(x,·), id).
Gate gate(const HierarchicalStructure& h, const VertexSet& Y, Vertex x);

struct ProductRegion {
  Domain U = 0;
  Length alpha;
  VertexSet P;
  std::vector<VertexSet> F_copies;  // grouped by projections to domains orthogonal to U
  std::vector<VertexSet> E_copies;  // grouped by projections to domains nested in U
  std::optional<Length> provider_gap;  // worst Hausdorff distance to the recorded parallel copies
};
ProductRegion product_region(const HierarchicalStructure& h, Domain U, std::optional<Length> alpha = std::nullopt);
nlohmann::json to_json(const HierarchicalStructure& h, const ProductRegion& p);

CheckReport check_gate_formulas(const HierarchicalStructure& h, Domain U, const CheckOptions& opt = {});

struct DistanceFormulaFit {
  Length s;
  Length K = Length::units(1);
  Length C;
  std::optional<Length> s0;  // smallest swept threshold with K within the cap
  bool exhaustive = true;
  std::size_t pairs = 0;
  std::size_t violations = 0;  // pairs outside the fitted bounds (0 by construction)
  std::vector<std::pair<Length, QiFit>> sweep;
};
struct DistanceFormulaOptions {
  CheckOptions check;
  int sweep_max = 8;
  Length k_cap = Length::units(4);
};
Length clipped_sum(const HierarchicalStructure& h, Vertex x, Vertex y, Length s);
DistanceFormulaFit distance_formula(const HierarchicalStructure& h, Length s, const DistanceFormulaOptions& opt = {});
nlohmann::json to_json(const DistanceFormulaFit& f);

struct PathVerdict {
  bool ok = true;
  std::optional<Domain> worst_domain;  // first failing domain; nullopt when the ambient test fails
  std::string reason;
  nlohmann::json breakpoints = nlohmann::json::object();  // per domain reparameterization indices
};
// Sequence of sets is an unparameterized (D,D)-quasigeodesic: breakpoints with segment diameters ≤ D
// chosen by a fewest-segments dynamic program, then the subsequence tested pairwise.
bool unparameterized_quasigeodesic(const FiniteMetricGraph& g, const std::vector<VertexSet>& seq, Length D,
                                   std::vector<std::size_t>* breaks = nullptr);
PathVerdict verify_hierarchy_path(const HierarchicalStructure& h, const std::vector<Vertex>& path, Length D);

struct PathSearch {
  std::optional<std::vector<Vertex>> path;
  std::string method;  // geodesic | pruned | exhaustive
  std::size_t candidates = 0;
};
PathSearch find_hierarchy_path(const HierarchicalStructure& h, Vertex x, Vertex y, Length D,
                               std::size_t budget = 20000);

}  // namespace hhs
