#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhs/structure.hpp"

namespace hhs {

struct CheckOptions {
  std::uint64_t seed = 1;
  std::size_t pair_budget = 250000;    // ambient (or CW) pairs scanned exhaustively up to this count
  std::size_t sample_pairs = 20000;    // pairs drawn above the budget
  std::size_t choice_budget = 200000;  // partial-realization coordinate choices
  std::size_t gate_points = 400;       // source points for gate checks before sampling
  std::vector<std::int64_t> kappa_ladder = {0, 1, 2, 3, 4, 5, 6, 8, 10};
};

struct CheckReport {
  std::string check;
  bool pass = true;
  bool exhaustive = true;
  std::uint64_t scanned = 0;
  Length observed;  // worst value, or smallest constant that would pass
  Length bound;     // recorded constant compared against
  nlohmann::json witness;  // null when there is nothing to show
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json to_json(const CheckReport& r);

CheckReport check_relations(const DomainIndex& d, int recorded_complexity);
CheckReport check_structure(const HierarchicalStructure& h);
CheckReport check_constants(const HierarchicalStructure& h);
CheckReport check_hyperbolicity(const HierarchicalStructure& h, const CheckOptions& opt = {});
CheckReport check_projections(const HierarchicalStructure& h, const CheckOptions& opt = {});
CheckReport check_consistency(const HierarchicalStructure& h);
CheckReport check_rho_consistency(const HierarchicalStructure& h);
CheckReport check_orth_close(const HierarchicalStructure& h);
CheckReport check_bgi(const HierarchicalStructure& h, const CheckOptions& opt = {});
CheckReport check_large_links(const HierarchicalStructure& h, const CheckOptions& opt = {});
CheckReport check_partial_realization(const HierarchicalStructure& h, const CheckOptions& opt = {});
// Per-κ maxima land in details["theta_u"]; pass iff each is within the recorded table.
CheckReport empirical_uniqueness(const HierarchicalStructure& h, const CheckOptions& opt = {});
ThetaTable uniqueness_profile(const HierarchicalStructure& h, const CheckOptions& opt = {});

struct PassingUp {
  int N = 1;
  bool exhaustive = true;
  nlohmann::json witness;
};
PassingUp check_passing_up(const HierarchicalStructure& h, Length C, const CheckOptions& opt = {});

struct RelevantOrder {
  std::vector<Domain> domains;        // the antichain considered
  std::vector<std::vector<char>> le;  // le[i][j]: domains[i] ⪯ domains[j]
  bool partial_order = true;
  bool below_threshold = false;  // K < 100E
  std::vector<Domain> numbering;  // a linear extension
  std::string diagnostic;
};
// antichain defaults to the ⊑-minimal K-relevant domains
RelevantOrder relevant_order(const HierarchicalStructure& h, Vertex x, Vertex y, Length K,
                             std::optional<std::vector<Domain>> antichain = std::nullopt);

// axiom: all|relations|proj|consistency|bgi|links|realization|uniqueness
std::vector<CheckReport> run_axiom_suite(const HierarchicalStructure& h, const std::string& axiom = "all",
                                         const CheckOptions& opt = {});
bool all_pass(const std::vector<CheckReport>& rs);

// Ambient pairs x<y: all of them within budget, else a seeded sample.
std::vector<std::pair<Vertex, Vertex>> scan_pairs(std::size_t n, const CheckOptions& opt, bool& exhaustive);

}  // namespace hhs
