#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "hhs/realization.hpp"
#include "hhs/structure.hpp"

namespace hhs {

struct HullOptions {
  Length D = Length::units(1);      // quasigeodesic constant of the ambient
  std::optional<Length> M;          // fixed admissibility constant; otherwise doubled until the claims hold
  int max_doublings = 8;
  std::size_t collection_budget = 4096;
};

struct HullStep {
  int n = 0;
  std::size_t size = 0;
  std::size_t admissible = 0;
  std::size_t collections = 0;
  bool contains_neighborhood = true;
  bool parallel_copies = true;
  bool image_projection = true;
  Length image_gap;
};

struct Hull {
  VertexSet A;
  Length M;
  int steps = 0;
  bool fixpoint = false;
  std::vector<HullStep> trace;
  VertexSet ball;  // ψ⁻¹ of the factored ball
  bool ball_contained = false;
  bool claims = false;
  HqcReport hqc;
  std::vector<Length> tried_M;
};

// Iterates A_n = N_{10D}(A_{n-1}) ∪ ⋃ B_𝒰 over admissible totally orthogonal collections of minimal domains.
Hull build_hull(const HierarchicalStructure& h, Vertex x0, Length R, const HullOptions& opt = {});
nlohmann::json to_json(const HierarchicalStructure& h, const Hull& hull);

}  // namespace hhs
