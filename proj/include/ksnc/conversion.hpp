#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ksnc/classical.hpp"
#include "ksnc/expression.hpp"
#include "ksnc/ks_rules.hpp"
#include "ksnc/orthogonality.hpp"
#include "ksnc/ray_set.hpp"

namespace ksnc {

/// Admissible lambda range (0, upper] guaranteeing that quantum violation of
/// the source KS inequality carries over to the derived inequality.
struct LambdaInterval {
  bool bounded = false;
  Rational upper{};  // valid iff bounded
  Rational default_choice{1};

  bool contains(const Rational& lambda) const {
    return lambda > 0 && (!bounded || lambda <= upper);
  }
};

/// upper = 1/(f'-f) when f < f'; unbounded otherwise. With f infeasible (KS
/// set) the choice of lambda is immaterial and the interval is all of (0,inf).
inline LambdaInterval select_lambda(const std::optional<Rational>& f,
                                    const std::optional<Rational>& f_prime) {
  if (!f && !f_prime)
    throw Error("both assignment classes are empty; cannot select lambda");
  LambdaInterval iv;
  if (f && f_prime && *f < *f_prime) {
    iv.bounded = true;
    iv.upper = Rational(1) / Rational(*f_prime - *f);
    iv.default_choice = iv.upper;
  }
  return iv;
}

/// F~ = lambda*F - sum_edges P_i P_j
///        + sum_bases (sum_i P_k_i - 2 sum_{i>j} P_k_i P_k_j).
/// A pair lying inside m bases (every such pair is also an edge) ends up with
/// total coefficient -1 - 2m.
inline Expression build_F_tilde(const Expression& F, const OrthogonalityGraph& g,
                                const BasisList& bases) {
  if (F.vars != VarKind::projector)
    throw InputError("the KS functional must be over projector variables");
  if (F.universe != g.vertex_count)
    throw InputError("universe mismatch: F has " + std::to_string(F.universe) +
                     " variables, the ray set has " + std::to_string(g.vertex_count));
  if (!lambda_free(F)) throw InputError("the KS functional F must be lambda-free");
  require_edges(F, g);

  Expression ft = times_lambda(F);
  const Affine minus_one{Rational(0), Rational(-1)};
  const Affine plus_one{Rational(0), Rational(1)};
  const Affine minus_two{Rational(0), Rational(-2)};
  for (const auto& [i, j] : g.edges) add_quadratic(ft, i, j, minus_one);
  for (const auto& basis : bases.bases) {
    for (int k : basis) add_linear(ft, k, plus_one);
    for (size_t a = 0; a < basis.size(); ++a)
      for (size_t b = a + 1; b < basis.size(); ++b)
        add_quadratic(ft, basis[a], basis[b], minus_two);
  }
  return ft;
}

/// KS-set shortcut: the lambda-free F~ obtained by dropping the lambda*F term
/// entirely. Refused on non-KS sets, where a concrete KS inequality is needed.
inline Expression build_ks_set_F_tilde(const OrthogonalityGraph& g, const BasisList& bases) {
  const auto cert = certify_ks_set(g, bases);
  if (!cert.is_ks)
    throw InputError(
        "not a KS set: a KS-obeying assignment exists; derive from an explicit KS inequality");
  return build_F_tilde(zero_expression(g.vertex_count), g, bases);
}

enum class BoundKind { relaxed, tight };

/// A noncontextuality inequality <functional> <= envelope(lambda), valid for
/// every 0/1 assignment and every lambda > 0.
struct Inequality {
  Expression functional;  // F-tilde, coefficients affine in lambda
  BoundEnvelope bound;
  BoundKind kind = BoundKind::relaxed;
  LambdaInterval lambda;
  std::string source;          // ray set id
  std::string ks_functional;   // canonical text of F; empty on the KS-set path
};

/// relaxed: envelope of {lambda*f + L, lambda*f' + L - 1}, infeasible branches
/// dropped (a KS set degenerates to the constant L - 1).
/// tight:   exact envelope of F~ over all assignments.
inline Inequality assemble_inequality(const Expression& f_tilde, const BoundsReport& bounds,
                                      int basis_count, BoundKind kind,
                                      const OrthogonalityGraph& g, const BasisList& bases,
                                      std::string source = {}, std::string ks_functional = {}) {
  if (f_tilde.universe != g.vertex_count)
    throw InputError("inconsistent provenance: functional universe does not match ray set");
  for (const auto& cm : {&bounds.ks, &bounds.exks})
    if (cm->feasible && static_cast<int>(cm->argmax.size()) != g.vertex_count)
      throw InputError("inconsistent provenance: bounds were computed on a different ray set");

  Inequality ineq;
  ineq.functional = f_tilde;
  ineq.kind = kind;
  ineq.source = std::move(source);
  ineq.ks_functional = std::move(ks_functional);
  ineq.lambda = select_lambda(
      bounds.ks.feasible ? std::optional<Rational>(bounds.ks.value) : std::nullopt,
      bounds.exks.feasible ? std::optional<Rational>(bounds.exks.value) : std::nullopt);

  if (kind == BoundKind::relaxed) {
    std::vector<Affine> lines;
    if (bounds.ks.feasible)
      lines.push_back(Affine{bounds.ks.value, Rational(basis_count)});
    if (bounds.exks.feasible)
      lines.push_back(Affine{bounds.exks.value, Rational(basis_count - 1)});
    std::sort(lines.begin(), lines.end());
    ineq.bound.feasible = true;
    ineq.bound.attained = lines;
    ineq.bound.lines = prune_upper_envelope(std::move(lines));
  } else {
    ineq.bound = bound_envelope(f_tilde, g, bases, Restriction::all);
  }
  return ineq;
}

/// The inequality at a fixed lambda: lambda-free functional plus its number
/// bound. lambda outside the guaranteed interval is flagged, not refused.
struct SpecializedInequality {
  Expression functional;
  Rational bound;
  bool lambda_in_interval = true;
};

inline SpecializedInequality specialize_at_lambda(const Inequality& ineq, const Rational& lambda) {
  return SpecializedInequality{substitute_lambda(ineq.functional, lambda),
                               ineq.bound.value_at(lambda), ineq.lambda.contains(lambda)};
}

/// The whole classical pipeline for one ray set: graph, bases, KS status,
/// bounds f/f', F~ and the assembled inequality. The expression text is
/// required for non-KS sets and optional for KS sets (shortcut form).
struct Derivation {
  OrthogonalityGraph graph;
  BasisList bases;
  KSCertificate ks;
  Expression F;
  bool ks_shortcut = false;  // true when F was omitted on a KS set
  BoundsReport bounds;
  Inequality inequality;
};

inline Derivation derive(const RaySet& rs, const std::optional<std::string>& expr_text,
                         BoundKind kind, SearchStrategy strategy = SearchStrategy::automatic) {
  Derivation d;
  d.graph = build_orthogonality_graph(rs);
  d.bases = enumerate_bases(d.graph, rs.dim);
  d.ks = certify_ks_set(d.graph, d.bases);
  if (expr_text) {
    d.F = parse_expression(*expr_text, rs.mu(), &d.graph);
    if (!lambda_free(d.F)) throw InputError("the KS inequality functional must be lambda-free");
  } else if (d.ks.is_ks) {
    d.F = zero_expression(rs.mu());
    d.ks_shortcut = true;
  } else {
    throw InputError("an expression is required: '" + rs.source +
                     "' is not a KS set, so no canonical functional exists");
  }
  d.bounds = compute_bounds(d.F, d.graph, d.bases, strategy);
  const Expression f_tilde = d.ks_shortcut ? build_ks_set_F_tilde(d.graph, d.bases)
                                           : build_F_tilde(d.F, d.graph, d.bases);
  d.inequality = assemble_inequality(f_tilde, d.bounds, d.bases.count(), kind, d.graph, d.bases,
                                     rs.source, d.ks_shortcut ? "" : to_string(d.F));
  return d;
}

}  // namespace ksnc
