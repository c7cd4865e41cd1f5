#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhs/graph.hpp"
#include "hhs/structure.hpp"

namespace hhs {

struct Cover {
  std::vector<std::vector<VertexSet>> families;
  Length D;
  std::optional<Length> B;
  std::vector<std::string> provenance;
  std::size_t dimension() const { return families.empty() ? 0 : families.size() - 1; }
  std::size_t set_count() const;
};

struct CoverVerdict {
  bool ok = true;
  Length B;
  std::vector<nlohmann::json> violations;  // first few, each with a kind
};
CoverVerdict verify_cover(const FiniteMetricGraph& X, const Cover& c, Length D);

struct Multiplicity {
  std::size_t m = 0;
  Vertex center = -1;
};
Multiplicity multiplicity(const FiniteMetricGraph& X, const Cover& c, Length r);

// n+1 families of bricks of side 2(n+1)D over a grid whose ids are "i,j,...".
Cover brick_cover(const FiniteMetricGraph& grid, Length D);

struct TightnessData {
  std::string kind = "interval";  // interval | geodesic | whole
  Length C;
  std::optional<std::size_t> K;
};
VertexSet beta(const FiniteMetricGraph& X, const TightnessData& T, Vertex x, Vertex y);

struct TightCheck {
  bool pass = true;
  bool exhaustive = true;
  Length hausdorff;  // worst of condition (1)
  std::size_t K = 0;  // worst cardinality in condition (2)
  std::uint64_t triples = 0;
  nlohmann::json witness;
};
TightCheck check_tight(const FiniteMetricGraph& X, const TightnessData& T, Length r, Length delta,
                       std::size_t triple_budget = 6000, std::uint64_t seed = 1);

// β_M(x,y) over the hat space: near the hat geodesic and M-close to {x,y} in every proper domain.
VertexSet beta_M(const HierarchicalStructure& h, const FiniteMetricGraph& hat, Vertex x, Vertex y, Length M);

struct AsdimCertificate {
  Cover cover;
  Length scale;  // r for tight covers
  Length bound;  // recorded diameter bound
  Multiplicity mult;
  nlohmann::json extra = nlohmann::json::object();
};
AsdimCertificate tight_cover(const FiniteMetricGraph& X, const TightnessData& T, Vertex x0, Length r, Length l);

struct CombineResult {
  bool ok = true;
  Cover cover;
  std::string reason;
  nlohmann::json witness;
};

struct Piece {
  VertexSet set;
  Cover cover;
};
// Pieces trimmed off Y keep their sets, Y's cover joins, and sets of one family
// within D of each other are merged.
CombineResult union_combine(const FiniteMetricGraph& X, const std::vector<Piece>& pieces, const Piece& Y, Length R);

// psi: X vertex → Y vertex. fiber[i] covers the preimage of the i-th Y set (families in order).
CombineResult fibration_combine(const FiniteMetricGraph& X, const FiniteMetricGraph& Y, const std::vector<Vertex>& psi,
                                const Cover& ycover, const std::vector<Cover>& fibers, Length lipschitz_bound);

struct LevelProfile {
  std::vector<int> level;  // per domain
  int xi = 0;
  std::map<int, std::size_t> P;  // ℓ → largest pairwise-orthogonal family of level-ℓ domains
};
LevelProfile level_profile(const DomainIndex& d);
std::int64_t asdim_bound(const LevelProfile& p, std::int64_t n, const std::map<int, std::int64_t>& Delta);

struct PipelineOptions {
  Length D = Length::units(1);
  std::int64_t n = 1;                     // asdim input for minimal-level spaces
  std::map<int, std::int64_t> Delta;      // missing levels count as 1
};

struct PipelineResult {
  bool ok = true;
  std::string failed_stage;
  LevelProfile profile;
  std::int64_t bound = 0;
  Cover cover;
  CoverVerdict verdict;
  Multiplicity half;  // D/2-multiplicity
  nlohmann::json stages = nlohmann::json::array();
};
PipelineResult asdim_pipeline(const HierarchicalStructure& h, const PipelineOptions& opt = {});

nlohmann::json cover_to_json(const FiniteMetricGraph& X, const Cover& c);
Cover cover_from_json(const FiniteMetricGraph& X, const nlohmann::json& j);  // throws ParseError
nlohmann::json certificate_to_json(const FiniteMetricGraph& X, const AsdimCertificate& a);
nlohmann::json to_json(const LevelProfile& p, const DomainIndex& d);

}  // namespace hhs
