#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ksnc/errors.hpp"

namespace ksnc {

/// Undirected graph on ray indices 1..vertex_count; an edge means the two
/// rays are orthogonal.
struct OrthogonalityGraph {
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;        // i < j, lexicographically sorted
  std::vector<std::vector<std::uint8_t>> adj;    // 1-based adjacency matrix

  bool adjacent(int i, int j) const { return adj[i][j] != 0; }

  friend bool operator==(const OrthogonalityGraph& a, const OrthogonalityGraph& b) {
    return a.vertex_count == b.vertex_count && a.edges == b.edges;
  }
};

inline OrthogonalityGraph make_graph(int vertex_count, std::vector<std::pair<int, int>> edges) {
  if (vertex_count < 1) throw InputError("graph needs at least one vertex");
  OrthogonalityGraph g;
  g.vertex_count = vertex_count;
  g.adj.assign(vertex_count + 1, std::vector<std::uint8_t>(vertex_count + 1, 0));
  for (auto& [i, j] : edges) {
    if (i < 1 || i > vertex_count || j < 1 || j > vertex_count)
      throw InputError("edge index out of range: {" + std::to_string(i) + "," +
                       std::to_string(j) + "}");
    if (i == j) throw InputError("self-loop at vertex " + std::to_string(i));
    if (i > j) std::swap(i, j);
    g.adj[i][j] = g.adj[j][i] = 1;
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.edges = std::move(edges);
  return g;
}

/// One orthogonal basis: ascending ray indices, size = space dimension.
using Basis = std::vector<int>;

struct BasisList {
  std::vector<Basis> bases;  // lexicographically sorted
  int count() const { return static_cast<int>(bases.size()); }

  friend bool operator==(const BasisList& a, const BasisList& b) { return a.bases == b.bases; }
};

namespace detail {

inline void extend_cliques(const OrthogonalityGraph& g, int n, std::vector<int>& current,
                           const std::vector<int>& candidates, std::vector<Basis>& out) {
  if (static_cast<int>(current.size()) == n) {
    out.push_back(current);
    return;
  }
  const size_t need = static_cast<size_t>(n) - current.size();
  for (size_t t = 0; t + need <= candidates.size(); ++t) {
    const int v = candidates[t];
    std::vector<int> next;
    next.reserve(candidates.size() - t - 1);
    for (size_t u = t + 1; u < candidates.size(); ++u)
      if (g.adjacent(v, candidates[u])) next.push_back(candidates[u]);
    current.push_back(v);
    extend_cliques(g, n, current, next, out);
    current.pop_back();
  }
}

}  // namespace detail

/// All n-cliques of the graph. In n dimensions, n mutually orthogonal rays
/// necessarily span, so n-clique <=> orthogonal basis. Vertices are tried in
/// ascending order, so the result is already canonically sorted.
inline BasisList enumerate_bases(const OrthogonalityGraph& g, int n) {
  if (n < 1) throw InputError("basis size must be positive");
  BasisList result;
  if (n > g.vertex_count) return result;
  std::vector<int> all(g.vertex_count);
  for (int v = 1; v <= g.vertex_count; ++v) all[v - 1] = v;
  std::vector<int> current;
  detail::extend_cliques(g, n, current, all, result.bases);
  return result;
}

}  // namespace ksnc
