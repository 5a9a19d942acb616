#pragma once

#include <string>
#include <vector>

#include "ksnc/conversion.hpp"
#include "ksnc/expression.hpp"
#include "ksnc/matrix.hpp"
#include "ksnc/ray_set.hpp"

namespace ksnc {

/// Rank-1 projector |v><v| of a (normalized) ray.
inline Matrix projector(const Ray& ray) {
  const double nrm = norm(ray.components);
  if (nrm < kZeroNormTolerance) throw InputError("zero ray has no projector");
  const int n = static_cast<int>(ray.components.size());
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = (ray.components[i] / nrm) * std::conj(ray.components[j] / nrm);
  return m;
}

/// c0(lambda) I + sum_i c_i(lambda) P_i + sum_{ij} c_ij(lambda) (P_i P_j + P_j P_i)/2.
/// Quadratic terms appear only on orthogonal pairs, whose symmetrized product
/// is zero up to the orthogonality error of the stored vectors; the
/// symmetrization keeps the operator Hermitian despite that error.
inline Matrix expression_operator(const Expression& e, const RaySet& rs, double lambda) {
  if (!rs.has_vectors()) throw VectorsRequiredError();
  if (e.vars != VarKind::projector)
    throw InputError("operator form applies to the projector expression");
  if (e.universe != rs.mu())
    throw InputError("expression universe does not match ray count");

  const int n = rs.dim;
  auto value = [lambda](const Affine& c) {
    return to_double(c.slope) * lambda + to_double(c.intercept);
  };

  std::vector<Matrix> proj;
  proj.reserve(rs.rays.size());
  for (const auto& r : rs.rays) proj.push_back(projector(r));

  Matrix op(n);
  op.add_scaled(Matrix::identity(n), value(e.constant));
  for (const auto& [i, c] : e.linear) op.add_scaled(proj[i - 1], value(c));
  for (const auto& [p, c] : e.quadratic) {
    const Matrix sym = proj[p.first - 1] * proj[p.second - 1] +
                       proj[p.second - 1] * proj[p.first - 1];
    op.add_scaled(sym, 0.5 * value(c));
  }
  return op;
}

enum class Violation { none, state_dependent, state_independent, inconclusive };

inline const char* to_cstring(Violation v) {
  switch (v) {
    case Violation::none: return "none";
    case Violation::state_dependent: return "state_dependent";
    case Violation::state_independent: return "state_independent";
    case Violation::inconclusive: return "inconclusive";
  }
  return "?";
}

inline constexpr double kViolationMargin = 1e-9;

struct QuantumReport {
  double lambda = 1.0;
  double max_value = 0.0;
  double min_value = 0.0;
  std::vector<Complex> optimal_state;  // unit eigenvector of the max eigenvalue
  double classical_bound = 0.0;
  Violation violation = Violation::none;
  bool lambda_in_interval = true;
};

/// Eigenvalue bounds of the functional's operator against the classical
/// envelope at lambda. State-independent means even the smallest eigenvalue
/// exceeds the bound; values within the numerical margin of the bound are
/// reported as inconclusive.
inline QuantumReport verify_violation(const Inequality& ineq, const RaySet& rs,
                                      const Rational& lambda) {
  QuantumReport rep;
  rep.lambda = to_double(lambda);
  rep.lambda_in_interval = ineq.lambda.contains(lambda);
  rep.classical_bound = to_double(ineq.bound.value_at(lambda));

  const Matrix op = expression_operator(ineq.functional, rs, rep.lambda);
  const EigenBounds eb = eigen_bounds(op);
  rep.max_value = eb.max;
  rep.min_value = eb.min;
  rep.optimal_state = eb.max_eigenvector;

  const double b = rep.classical_bound;
  if (rep.min_value > b + kViolationMargin)
    rep.violation = Violation::state_independent;
  else if (rep.max_value > b + kViolationMargin)
    rep.violation = Violation::state_dependent;
  else if (rep.max_value >= b - kViolationMargin)
    rep.violation = Violation::inconclusive;
  else
    rep.violation = Violation::none;
  return rep;
}

}  // namespace ksnc
