#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hhs/axioms.hpp"
#include "hhs/structure.hpp"

namespace hhs {

// Vertex budget for constructed instances; HHS_BUDGET overrides.
std::size_t vertex_budget();

struct GridSpec {
  std::vector<int> dims;
};

HierarchicalStructure grid_instance(const GridSpec& spec);
HierarchicalStructure tree_instance(const FiniteMetricGraph& tree);
HierarchicalStructure product_instance(const HierarchicalStructure& a, const HierarchicalStructure& b);

struct RelativeSpec {
  FiniteMetricGraph tree;
  std::vector<std::string> attachments;
  std::vector<std::pair<int, int>> flats;  // side lengths (vertices per side)
};

RelativeSpec default_relative_spec();
RelativeSpec relative_spec_from_json(const nlohmann::json& j);
nlohmann::json relative_spec_to_json(const RelativeSpec& s);
HierarchicalStructure relative_instance(const RelativeSpec& spec);

// Measures every constant on h and records the smallest whole values that pass.
ConstantsBundle calibrate_constants(const HierarchicalStructure& h, const CheckOptions& opt = {});

struct CayleyBallSpec {
  int rank = 2;
  int radius = 2;
  std::string subgroup = "a";
  int coset_depth = -1;  // -1: radius / 2
};

struct Coset {
  std::string rep;              // shortest member
  std::vector<Vertex> members;  // in order of increasing power
  FiniteMetricGraph graph;      // consecutive powers adjacent; ids are the base ids
};

struct FreeBall {
  CayleyBallSpec spec;
  FiniteMetricGraph graph;
  std::vector<std::string> words;  // reduced word per vertex
  std::vector<Coset> cosets;
  Vertex vertex_of(const std::string& word) const;  // throws if outside the ball
  std::optional<Vertex> find(const std::string& word) const;
};

FreeBall free_ball(const CayleyBallSpec& spec);

// Path and random-tree helpers used by the CLI and examples.
FiniteMetricGraph path_graph(int n);
FiniteMetricGraph random_tree(int n, std::uint64_t seed);
FiniteMetricGraph binary_tree(int depth, int spacing = 1);

}  // namespace hhs
