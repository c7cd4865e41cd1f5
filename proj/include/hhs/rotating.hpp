#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhs/cusped.hpp"
#include "hhs/instances.hpp"
#include "hhs/metric.hpp"

namespace hhs {

// Desk-scale knobs: window [w1,w2] around apices, weak/strong defects, and the
// apex distance allowed in branch B of the dichotomy.
struct RotatingOptions {
  Length w1 = Length::units(1);
  Length w2 = Length::units(2);
  Length d_weak = Length::units(1);
  Length d_strong = Length::units(2);
  std::optional<Length> apex_radius;  // default r + 1
};

struct RotatingContext {
  FreeBall ball;
  PyramidSpace P;
  std::vector<std::string> N;  // reduced words, closed under inversion
  RotatingOptions opt;
  std::vector<std::string> rep;  // shortest member per cone
};

RotatingContext rotating_context(const FreeBall& ball, int r, const std::vector<std::string>& N,
                                 const RotatingOptions& opt = {});

// Left translation of a pyramid vertex; nullopt when the image leaves the pyramid.
std::optional<Vertex> act(const RotatingContext& ctx, const std::string& h, Vertex z);

struct FulcrumWitness {
  std::size_t coset = 0;
  Vertex apex = -1;
  Vertex xp = -1, yp = -1;
  std::string h;
  Length defect;
};

std::vector<FulcrumWitness> detect_fulcrum(const RotatingContext& ctx, Vertex x, Vertex y, Length d);
// Re-checks additivity, interval membership, window and defect from the fields alone.
bool validate_fulcrum(const RotatingContext& ctx, Vertex x, Vertex y, const FulcrumWitness& w, Length d);
bool is_linked(const RotatingContext& ctx, Vertex p, Vertex q);
bool is_weakly_linked(const RotatingContext& ctx, Vertex p, Vertex q);

struct Greendlinger {
  char branch = '-';  // 'A', 'B', or '-' when neither holds
  std::optional<std::size_t> coset;
  Length apex_distance;
  std::vector<FulcrumWitness> fulcra;
};
// Throws std::out_of_range when n·p leaves the ball.
Greendlinger greendlinger_check(const RotatingContext& ctx, const std::string& n, Vertex p);

struct Separation {
  Length M;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};
Separation geometric_separation(const FiniteMetricGraph& base, const std::vector<VertexSet>& cosets, Length eps);

// Union-find identification by the conjugates w n w⁻¹ with |w| ≤ L; cls[v] is the least member.
struct Fold {
  int L = 0;
  std::vector<Vertex> cls;
  std::size_t conjugates = 0;
  std::size_t identifications = 0;
};
Fold fold_pyramid(const RotatingContext& ctx, int L);
// Largest ρ such that the two folds agree on vertices within word length ρ.
int agreement_radius(const RotatingContext& ctx, const Fold& a, const Fold& b);

struct QuotientPyramid {
  Fold fold;
  FiniteMetricGraph graph;  // one vertex per class, id of the least member
  std::vector<Vertex> vertex_of;  // pyramid vertex → quotient vertex
  DeltaEstimate delta;
  int stable_radius = 0;  // agreement with the fold at L + 2
  bool stable = false;    // agreement on the whole ball
  Length cone_diameter;   // folded cone over the first coset
};
QuotientPyramid quotient_pyramid(const RotatingContext& ctx, int L, const DeltaOptions& dopt = {});
nlohmann::json to_json(const RotatingContext& ctx, const QuotientPyramid& q);

struct LinkedPair {
  std::size_t orbit_a, orbit_b;
  std::size_t U, V;  // cosets
  Length distance;
  bool linked = false;
};

struct QuotientIndex {
  std::vector<std::vector<std::size_t>> orbits;  // cosets per orbit; S is kept apart
  bool stable = false;                           // same orbits at L + 2
  std::vector<LinkedPair> pairs;
  std::size_t max_close = 0;  // most partners of one representative inside the close radius
  Length close;
};
QuotientIndex quotient_index_set(const RotatingContext& ctx, int L, std::size_t max_pairs = 20,
                                 std::optional<Length> close = std::nullopt);
nlohmann::json to_json(const RotatingContext& ctx, const FulcrumWitness& w);
nlohmann::json to_json(const RotatingContext& ctx, const QuotientIndex& q);

}  // namespace hhs
