#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "hhs/graph.hpp"
#include "hhs/instances.hpp"
#include "hhs/metric.hpp"
#include "hhs/structure.hpp"

namespace hhs {

// Level graph over a base. Level-0 vertices keep the base ids and indices;
// (v,k) for k ≥ 1 is "id@k"; the apex, when present, is the last vertex.
struct CuspedGraph {
  FiniteMetricGraph base;
  FiniteMetricGraph graph;
  int depth = 0;
  std::optional<int> radius;     // set for cones
  std::optional<Vertex> apex;
  std::vector<int> level;        // -1 at the apex
  std::vector<Vertex> base_of;   // -1 at the apex
  Vertex at(Vertex v, int k) const { return static_cast<Vertex>(static_cast<std::size_t>(k) * base.size() + static_cast<std::size_t>(v)); }
};

int default_horoball_depth(const FiniteMetricGraph& base);
// depth < 0 picks ⌈log₂ diam⌉ + 2
CuspedGraph horoball(const FiniteMetricGraph& base, int depth = -1);
CuspedGraph hyperbolic_cone(const FiniteMetricGraph& base, int r);
nlohmann::json to_json(const CuspedGraph& c);

struct ConeBase {
  std::vector<Vertex> members;  // base vertices
  FiniteMetricGraph metric;     // on the members in this order; empty means the base metric
};

// Base graph with a cone of radius r over each coset, glued along level 0.
struct PyramidSpace {
  FiniteMetricGraph base;
  FiniteMetricGraph graph;
  int r = 1;
  std::vector<VertexSet> cosets;  // sorted base vertices
  std::vector<std::string> names; // apex id suffix per coset
  std::vector<Vertex> apex;
  std::vector<int> level;         // -1 at apices
  std::vector<Vertex> base_of;    // -1 at apices
  std::vector<int> coset_of;      // -1 off every cone
  Length apex_separation;         // least distance between two apices (0 with fewer than two)
  std::vector<Vertex> lift_;      // (u,k) for k ≥ 1, indexed u*r + k-1

  std::size_t base_size() const { return base.size(); }
  bool in_base(Vertex v) const { return static_cast<std::size_t>(v) < base.size(); }
  std::optional<Vertex> lift(Vertex u, int k) const;  // (u,k); k = 0 gives u
  VertexSet cone(std::size_t c) const;  // every vertex of the cone, apex included
};

// Throws StructuralError when cosets overlap or r < 1.
PyramidSpace pyramid(const FiniteMetricGraph& base, const std::vector<ConeBase>& cosets, int r);
PyramidSpace pyramid_over(const FreeBall& ball, int r);
nlohmann::json to_json(const PyramidSpace& p, bool with_graph = false);

Length cone_quasiconvexity(const PyramidSpace& p, std::size_t coset);

struct HullCheck {
  bool ok = true;
  Length bound;
  Length observed;
  std::size_t members_met = 0;
};
// The union of the geodesic with every member it meets is (Q+2δ)-quasiconvex.
HullCheck quasiconvex_hull_check(const FiniteMetricGraph& g, const std::vector<Vertex>& geodesic,
                                 const std::vector<VertexSet>& family, Length Q, Length delta);

// First cone vertices along all geodesics from x to the apex. Inside the cone:
// x itself on the coset, the whole coset anywhere above it.
VertexSet entry_points(const PyramidSpace& p, Vertex x, std::size_t coset);
// Entry sets of every pyramid vertex into one cone, in one labelled search.
std::vector<VertexSet> all_entry_points(const PyramidSpace& p, std::size_t coset);

struct PushOff {
  std::vector<Vertex> path;     // base vertices
  QiFit fit;                    // parameter against base distance
  Length hausdorff;             // to the least base geodesic between the endpoints
  std::size_t replaced = 0;     // cone segments replaced
};
PushOff push_off(const PyramidSpace& p, const std::vector<Vertex>& geodesic);

// Auxiliary structure {S} ∪ cosets over a one-domain base: CS is the pyramid over
// the base's CS, C(gH) the coset metric, π_{gH} = entry points of π_S.
HierarchicalStructure aux_structure(const HierarchicalStructure& base, const std::vector<ConeBase>& cosets, int r,
                                    const CheckOptions& opt = {});

}  // namespace hhs
