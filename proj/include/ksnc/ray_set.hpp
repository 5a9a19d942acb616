#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ksnc/errors.hpp"
#include "ksnc/orthogonality.hpp"

namespace ksnc {

using Complex = std::complex<double>;

inline constexpr double kDefaultOrthoTolerance = 1e-9;
inline constexpr double kZeroNormTolerance = 1e-12;

/// A rank-1 direction in the n-dimensional inner-product space.
struct Ray {
  std::vector<Complex> components;
  std::string name;
};

inline Complex inner_product(const std::vector<Complex>& u, const std::vector<Complex>& v) {
  Complex s = 0.0;
  for (size_t k = 0; k < u.size(); ++k) s += std::conj(u[k]) * v[k];
  return s;
}

inline double norm(const std::vector<Complex>& u) {
  double s = 0.0;
  for (const auto& c : u) s += std::norm(c);
  return std::sqrt(s);
}

/// A validated set of mu rays in dimension dim, or (adjacency-only mode) just
/// their orthogonality graph. Immutable after construction; build through
/// make_ray_set / make_adjacency_ray_set.
struct RaySet {
  int dim = 0;
  std::vector<Ray> rays;  // normalized; empty in adjacency-only mode
  double tolerance = kDefaultOrthoTolerance;
  std::string source;
  std::optional<OrthogonalityGraph> adjacency;  // set in adjacency-only mode

  int mu() const { return adjacency ? adjacency->vertex_count : static_cast<int>(rays.size()); }
  bool has_vectors() const { return !adjacency.has_value(); }
};

inline RaySet make_ray_set(int dim, std::vector<Ray> rays,
                           double tolerance = kDefaultOrthoTolerance,
                           std::string source = {}) {
  if (dim < 1) throw InputError("ray set dimension must be positive");
  if (rays.empty()) throw InputError("ray set must contain at least one ray");
  if (!(tolerance > 0) || tolerance >= 1)
    throw InputError("orthogonality tolerance must lie in (0, 1)");
  for (size_t i = 0; i < rays.size(); ++i) {
    auto& r = rays[i];
    if (static_cast<int>(r.components.size()) != dim)
      throw InputError("ray " + std::to_string(i + 1) + " has " +
                       std::to_string(r.components.size()) + " components, expected " +
                       std::to_string(dim));
    const double nrm = norm(r.components);
    if (nrm < kZeroNormTolerance)
      throw InputError("ray " + std::to_string(i + 1) + " is the zero vector");
    for (auto& c : r.components) c /= nrm;
  }
  // Parallel pairs (duplicates up to phase) are rejected so that index <->
  // symbol correspondence stays unambiguous.
  for (size_t i = 0; i < rays.size(); ++i)
    for (size_t j = i + 1; j < rays.size(); ++j)
      if (std::abs(inner_product(rays[i].components, rays[j].components)) >= 1.0 - tolerance)
        throw InputError("rays " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                         " are parallel (duplicate up to phase)");
  RaySet rs;
  rs.dim = dim;
  rs.rays = std::move(rays);
  rs.tolerance = tolerance;
  rs.source = std::move(source);
  return rs;
}

inline RaySet make_adjacency_ray_set(int dim, int mu, std::vector<std::pair<int, int>> edges,
                                     std::string source = {}) {
  if (dim < 1) throw InputError("ray set dimension must be positive");
  if (mu < 1) throw InputError("ray set must contain at least one ray");
  RaySet rs;
  rs.dim = dim;
  rs.source = std::move(source);
  rs.adjacency = make_graph(mu, std::move(edges));
  return rs;
}

/// Edge {i,j} present iff |<ray_i, ray_j>| <= tolerance. Deterministic.
inline OrthogonalityGraph build_orthogonality_graph(const RaySet& rs) {
  if (rs.adjacency) return *rs.adjacency;
  std::vector<std::pair<int, int>> edges;
  const int mu = rs.mu();
  for (int i = 1; i <= mu; ++i)
    for (int j = i + 1; j <= mu; ++j)
      if (std::abs(inner_product(rs.rays[i - 1].components, rs.rays[j - 1].components)) <=
          rs.tolerance)
        edges.emplace_back(i, j);
  return make_graph(mu, std::move(edges));
}

}  // namespace ksnc
