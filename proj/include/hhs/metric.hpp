#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hhs/graph.hpp"
#include "hhs/length.hpp"

namespace hhs {

VertexSet interval(const FiniteMetricGraph& g, Vertex u, Vertex v);
Length hausdorff(const FiniteMetricGraph& g, const VertexSet& a, const VertexSet& b);

// min over pairs; sets must be nonempty
Length set_distance(const FiniteMetricGraph& g, const VertexSet& a, const VertexSet& b);
Length set_diameter(const FiniteMetricGraph& g, const VertexSet& a);
Length diameter(const FiniteMetricGraph& g);
VertexSet ball(const FiniteMetricGraph& g, Vertex c, Length r);
VertexSet neighborhood(const FiniteMetricGraph& g, const VertexSet& s, Length r);
// Lexicographically least shortest path (smallest next-vertex index at each step).
std::vector<Vertex> geodesic(const FiniteMetricGraph& g, Vertex u, Vertex v);

struct DeltaEstimate {
  Length delta;
  bool exhaustive = true;
  std::uint64_t quadruples = 0;  // quadruples effectively bounded
  std::size_t pool = 0;          // vertices taking part
  std::vector<Vertex> witness;   // a quadruple attaining delta
};

struct DeltaOptions {
  std::size_t exhaustive_limit = 2500;
  std::size_t sample_pool = 96;
  std::uint64_t seed = 1;
};

DeltaEstimate gromov_delta(const FiniteMetricGraph& g, const DeltaOptions& opt = {});
// Exhaustive four-point value restricted to the given vertices.
DeltaEstimate gromov_delta_on(const FiniteMetricGraph& g, const VertexSet& pool);

struct QuasiconvexityResult {
  bool ok = true;
  Length worst;  // max distance from an interval point to Y
  std::optional<std::array<Vertex, 3>> witness;  // u, v, z
};

QuasiconvexityResult is_quasiconvex(const FiniteMetricGraph& g, const VertexSet& y, Length q);
Length quasiconvexity_constant(const FiniteMetricGraph& g, const VertexSet& y);

struct QiFit {
  Length lambda = Length::units(1);
  Length epsilon;
};

struct DistancePair {
  Length d1, d2;
};

QiFit qi_fit(const std::vector<DistancePair>& pairs);
bool qi_fit_holds(const QiFit& f, const std::vector<DistancePair>& pairs);

nlohmann::json to_json(const DeltaEstimate& d);
nlohmann::json to_json(const QiFit& f);

}  // namespace hhs
