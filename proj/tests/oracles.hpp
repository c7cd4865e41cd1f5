#pragma once
// Independent reference computations used only by tests.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "hhs/graph.hpp"
#include "hhs/rng.hpp"

namespace oracle {

using Table = std::vector<std::vector<std::int64_t>>;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

inline Table floyd_warshall(const hhs::FiniteMetricGraph& g) {
  const std::size_t n = g.size();
  Table d(n, std::vector<std::int64_t>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (const auto& a : g.neighbors(static_cast<int>(i))) d[i][a.to] = std::min(d[i][a.to], a.w);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

// Max over all quadruples of (largest - second largest pair sum), halved and rounded up.
inline std::int64_t brute_delta_ticks(const Table& d) {
  const std::size_t n = d.size();
  std::int64_t best = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y)
      for (std::size_t z = y + 1; z < n; ++z)
        for (std::size_t w = z + 1; w < n; ++w) {
          std::int64_t s[3] = {d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]};
          std::sort(s, s + 3);
          best = std::max(best, s[2] - s[1]);
        }
  return (best + 1) / 2;
}

inline hhs::FiniteMetricGraph path(int n) {
  hhs::GraphBuilder b;
  for (int i = 0; i <= n; ++i) b.add_vertex(std::to_string(i));
  for (int i = 0; i < n; ++i) b.add_edge(i, i + 1);
  return b.build();
}

inline hhs::FiniteMetricGraph cycle(int n) {
  hhs::GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(std::to_string(i));
  for (int i = 0; i < n; ++i) b.add_edge(i, (i + 1) % n);
  return b.build();
}

inline std::string cell(int i, int j) { return std::to_string(i) + "," + std::to_string(j); }

inline hhs::FiniteMetricGraph grid(int w, int h) {
  hhs::GraphBuilder b;
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < h; ++j) b.add_vertex(cell(i, j));
  for (int i = 0; i < w; ++i)
    for (int j = 0; j < h; ++j) {
      if (i + 1 < w) b.add_edge(cell(i, j), cell(i + 1, j));
      if (j + 1 < h) b.add_edge(cell(i, j), cell(i, j + 1));
    }
  return b.build();
}

inline hhs::FiniteMetricGraph random_tree(int n, std::uint64_t seed) {
  hhs::Rng rng(seed);
  hhs::GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex("t" + std::to_string(i));
  for (int i = 1; i < n; ++i) b.add_edge(i, static_cast<int>(rng.below(static_cast<std::uint64_t>(i))));
  return b.build();
}

inline hhs::FiniteMetricGraph random_connected(int n, int extra, std::uint64_t seed, bool weighted = false) {
  hhs::Rng rng(seed);
  hhs::GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex("v" + std::to_string(i));
  auto w = [&] { return weighted ? hhs::Length::ratio(static_cast<std::int64_t>(1 + rng.below(6)), 2) : hhs::Length::units(1); };
  for (int i = 1; i < n; ++i) b.add_edge(i, static_cast<int>(rng.below(static_cast<std::uint64_t>(i))), w());
  for (int k = 0; k < extra; ++k) {
    int u = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (u != v) b.add_edge(u, v, w());
  }
  return b.build();
}


using Adjacency = std::vector<std::vector<int>>;

// Hop distances on a plain adjacency list; -1 when unreachable.
inline std::vector<int> bfs(const Adjacency& adj, int s) {
  std::vector<int> d(adj.size(), -1);
  std::vector<int> q{s};
  d[static_cast<std::size_t>(s)] = 0;
  for (std::size_t h = 0; h < q.size(); ++h)
    for (int v : adj[static_cast<std::size_t>(q[h])])
      if (d[static_cast<std::size_t>(v)] < 0) {
        d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(q[h])] + 1;
        q.push_back(v);
      }
  return d;
}

}  // namespace oracle
