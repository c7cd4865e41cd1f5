#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "hhs/length.hpp"

namespace hhs {

using Vertex = int;
using VertexSet = std::vector<Vertex>;  // sorted, unique

struct Arc {
  Vertex to;
  std::int64_t w;  // ticks
};

// Distances from one source in ticks; kFar marks unreachable vertices.
class DistRow {
 public:
  static constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max();
  DistRow() = default;
  explicit DistRow(std::shared_ptr<const std::vector<std::int64_t>> d)
      : owner_(d), p_(d->data()), n_(d->size()) {}
  DistRow(std::shared_ptr<const void> owner, const std::int64_t* p, std::size_t n)
      : owner_(std::move(owner)), p_(p), n_(n) {}
  std::int64_t operator[](Vertex v) const { return p_[static_cast<std::size_t>(v)]; }
  bool reachable(Vertex v) const { return (*this)[v] != kFar; }
  Length at(Vertex v) const;
  std::size_t size() const { return n_; }
  const std::int64_t* begin() const { return p_; }
  const std::int64_t* end() const { return p_ + n_; }

 private:
  std::shared_ptr<const void> owner_;
  const std::int64_t* p_ = nullptr;
  std::size_t n_ = 0;
};

class GraphBuilder;

// Immutable weighted graph with an exact shortest-path oracle.
// Copies share structure and the distance cache.
class FiniteMetricGraph {
 public:
  FiniteMetricGraph();

  std::size_t size() const;
  const std::string& id(Vertex v) const;
  std::optional<Vertex> find(const std::string& id) const;
  Vertex at(const std::string& id) const;  // throws ParseError
  const std::string* label(Vertex v) const;
  std::span<const Arc> neighbors(Vertex v) const;
  std::size_t edge_count() const;
  bool unit_weight() const;
  bool connected() const;
  int component(Vertex v) const;

  std::optional<Length> dist(Vertex u, Vertex v) const;
  Length d(Vertex u, Vertex v) const;  // throws UnreachableError
  std::int64_t dt(Vertex u, Vertex v) const;  // ticks, throws UnreachableError
  DistRow row(Vertex source) const;
  // Multi-source distances to the nearest member of s.
  DistRow row_to_set(const VertexSet& s) const;
  // Whether the all-pairs table is (or will be) materialized.
  bool dense() const;

  static void set_dense_budget(std::size_t n);
  static std::size_t dense_budget();

 private:
  friend class GraphBuilder;
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

class GraphBuilder {
 public:
  Vertex add_vertex(const std::string& id);
  Vertex ensure_vertex(const std::string& id);
  void set_label(Vertex v, std::string tag);
  // Parallel edges keep the shorter weight.
  void add_edge(Vertex u, Vertex v, Length w = Length::units(1));
  void add_edge(const std::string& u, const std::string& v, Length w = Length::units(1));
  std::size_t size() const { return ids_.size(); }
  std::optional<Vertex> find(const std::string& id) const;
  FiniteMetricGraph build() const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, Vertex> index_;
  std::unordered_map<Vertex, std::string> labels_;
  std::vector<std::unordered_map<Vertex, std::int64_t>> adj_;
};

nlohmann::json graph_to_json(const FiniteMetricGraph& g);
FiniteMetricGraph graph_from_json(const nlohmann::json& j);

// Set helpers.
VertexSet normalized(VertexSet s);
bool contains(const VertexSet& s, Vertex v);
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet all_vertices(const FiniteMetricGraph& g);

// Induced subgraph; ids are kept.
FiniteMetricGraph induced_subgraph(const FiniteMetricGraph& g, const VertexSet& s);

}  // namespace hhs
