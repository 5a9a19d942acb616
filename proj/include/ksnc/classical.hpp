#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ksnc/expression.hpp"
#include "ksnc/ks_rules.hpp"
#include "ksnc/orthogonality.hpp"
#include "ksnc/rational.hpp"

namespace ksnc {

enum class Restriction { all, ks_obeying, ks_violating };

enum class SearchStrategy { automatic, exhaustive, branch_and_bound };

inline constexpr int kExhaustiveMaxMu = 24;

/// Exact maximum of an expression over one assignment class.
struct ClassMaximum {
  bool feasible = false;  // false iff the class is empty
  Rational value{};
  Assignment argmax;  // lexicographically smallest maximizer
  std::uint64_t nodes = 0;
};

/// f and f' of a lambda-free functional F.
struct BoundsReport {
  ClassMaximum ks;    // max over KS-obeying assignments (f)
  ClassMaximum exks;  // max over KS-violating assignments (f')
};

namespace detail {

// Terms with a common positive denominator pulled out, so the search loops
// run on W (= long long when every weight fits, exact Rational otherwise).
template <class W>
struct CompiledValue {
  BigInt den{1};  // value = raw / den
  W constant{};
  std::vector<W> linear;  // 1-based
  struct Quad {
    int i, j;
    W w;
  };
  std::vector<Quad> quads;
  std::vector<std::vector<std::pair<int, W>>> incident;  // per vertex: (other, w)

  void build_incident(int mu) {
    incident.assign(mu + 1, {});
    for (const auto& q : quads) {
      incident[q.i].emplace_back(q.j, q.w);
      incident[q.j].emplace_back(q.i, q.w);
    }
  }
};

inline constexpr long long kWeightSumLimit = 1LL << 60;

// nullopt when the scaled weights would not safely fit 64-bit arithmetic.
inline std::optional<CompiledValue<long long>> compile_int64(
    const std::vector<Rational>& coefs, int mu,
    const std::vector<std::pair<int, int>>& quad_keys) {
  BigInt den = 1;
  for (const auto& c : coefs) den = boost::multiprecision::lcm(den, denominator(c));
  CompiledValue<long long> out;
  out.den = den;
  out.linear.assign(mu + 1, 0);
  BigInt sum_abs = 0;
  std::vector<long long> w(coefs.size());
  for (size_t t = 0; t < coefs.size(); ++t) {
    BigInt scaled = numerator(coefs[t]) * (den / denominator(coefs[t]));
    sum_abs += abs(scaled);
    if (sum_abs > kWeightSumLimit) return std::nullopt;
    w[t] = scaled.convert_to<long long>();
  }
  out.constant = w[0];
  for (int i = 1; i <= mu; ++i) out.linear[i] = w[i];
  for (size_t q = 0; q < quad_keys.size(); ++q)
    out.quads.push_back({quad_keys[q].first, quad_keys[q].second, w[mu + 1 + q]});
  out.build_incident(mu);
  return out;
}

inline CompiledValue<Rational> compile_rational(const std::vector<Rational>& coefs, int mu,
                                                const std::vector<std::pair<int, int>>& quad_keys) {
  CompiledValue<Rational> out;
  out.linear.assign(mu + 1, Rational(0));
  out.constant = coefs[0];
  for (int i = 1; i <= mu; ++i) out.linear[i] = coefs[i];
  for (size_t q = 0; q < quad_keys.size(); ++q)
    out.quads.push_back({quad_keys[q].first, quad_keys[q].second, coefs[mu + 1 + q]});
  out.build_incident(mu);
  return out;
}

// Flattens the expression at fixed lambda into [constant, linear 1..mu, quads].
inline void flatten_at_lambda(const Expression& e, const Rational& lambda,
                              std::vector<Rational>& coefs,
                              std::vector<std::pair<int, int>>& quad_keys) {
  coefs.assign(e.universe + 1, Rational(0));
  coefs[0] = e.constant.at(lambda);
  for (const auto& [i, c] : e.linear) coefs[i] = c.at(lambda);
  for (const auto& [p, c] : e.quadratic) {
    quad_keys.push_back(p);
    coefs.push_back(c.at(lambda));
  }
}

struct ClassMasks {
  std::vector<std::pair<int, int>> edge_bits;  // 0-based bit positions
  std::vector<std::uint32_t> basis_masks;

  ClassMasks(const OrthogonalityGraph& g, const BasisList& bases) {
    for (const auto& [i, j] : g.edges) edge_bits.emplace_back(i - 1, j - 1);
    for (const auto& b : bases.bases) {
      std::uint32_t m = 0;
      for (int k : b) m |= 1u << (k - 1);
      basis_masks.push_back(m);
    }
  }

  bool obeys(std::uint32_t mask) const {
    for (const auto& [i, j] : edge_bits)
      if ((mask >> i) & (mask >> j) & 1u) return false;
    for (std::uint32_t bm : basis_masks)
      if (std::popcount(mask & bm) != 1) return false;
    return true;
  }

  bool in_class(std::uint32_t mask, Restriction r) const {
    if (r == Restriction::all) return true;
    return obeys(mask) == (r == Restriction::ks_obeying);
  }
};

// Assignment-vector lexicographic order on bit masks: the vectors agree below
// the lowest differing bit, so the mask with 0 there is smaller.
inline bool mask_lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  const int k = std::countr_zero(a ^ b);
  return ((a >> k) & 1u) == 0;
}

template <class W>
struct RawMax {
  bool feasible = false;
  W best{};
  std::uint32_t best_mask = 0;
  Assignment argmax;
  std::uint64_t nodes = 0;
};

template <class W>
RawMax<W> exhaustive_max(const CompiledValue<W>& c, int mu, const ClassMasks& masks,
                         Restriction r) {
  RawMax<W> out;
  const std::uint32_t end = mu >= 32 ? 0 : (1u << mu);
  for (std::uint32_t mask = 0; mask != end; ++mask) {
    ++out.nodes;
    if (!masks.in_class(mask, r)) continue;
    W v = c.constant;
    for (int i = 1; i <= mu; ++i)
      if ((mask >> (i - 1)) & 1u) v += c.linear[i];
    for (const auto& q : c.quads)
      if (((mask >> (q.i - 1)) & (mask >> (q.j - 1))) & 1u) v += q.w;
    if (!out.feasible || v > out.best ||
        (v == out.best && mask_lex_less(mask, out.best_mask))) {
      out.feasible = true;
      out.best = std::move(v);
      out.best_mask = mask;
    }
  }
  if (out.feasible) out.argmax = assignment_from_mask(out.best_mask, mu);
  return out;
}

// DFS over variables in index order, value 0 first; unit propagation for the
// KS-obeying class; optimistic-completion upper bound for pruning. Visits
// leaves in assignment-lex order, so the first strict improvement is the
// lex-smallest maximizer.
template <class W>
class BranchAndBound {
 public:
  BranchAndBound(const CompiledValue<W>& c, const OrthogonalityGraph& g, const BasisList& bases,
                 Restriction r)
      : c_(c), bases_(bases), restr_(r), mu_(g.vertex_count) {
    val_.assign(mu_ + 1, -1);
    neighbors_.assign(mu_ + 1, {});
    for (const auto& [i, j] : g.edges) {
      neighbors_[i].push_back(j);
      neighbors_[j].push_back(i);
    }
    member_of_.assign(mu_ + 1, {});
    ones_.assign(bases_.count(), 0);
    zeros_.assign(bases_.count(), 0);
    for (int b = 0; b < bases_.count(); ++b)
      for (int k : bases_.bases[b]) member_of_[k].push_back(b);
  }

  RawMax<W> run() {
    cur_ = c_.constant;
    dfs();
    return std::move(out_);
  }

 private:
  bool assign(int v, int x) {
    if (val_[v] != -1) return val_[v] == x;
    val_[v] = static_cast<int8_t>(x);
    trail_.push_back(v);
    // counters first: a trail entry must always be fully counted so undo_to
    // stays exact even when an obeying-mode conflict aborts this call
    for (int b : member_of_[v]) (x == 1 ? ones_[b] : zeros_[b])++;
    if (x == 1) {
      cur_ += c_.linear[v];
      for (const auto& [u, w] : c_.incident[v])
        if (val_[u] == 1) cur_ += w;
      for (int u : neighbors_[v])
        if (val_[u] == 1) {
          if (restr_ == Restriction::ks_obeying) return false;
          ++violations_;
        }
    }
    for (int b : member_of_[v]) {
      const int size = static_cast<int>(bases_.bases[b].size());
      if (restr_ == Restriction::ks_obeying) {
        if (ones_[b] > 1) return false;
        if (zeros_[b] == size) return false;
      } else if (ones_[b] + zeros_[b] == size && ones_[b] != 1) {
        ++violations_;  // completed basis breaking exactly-one
      }
    }
    if (restr_ == Restriction::ks_obeying) {
      if (x == 1) {
        for (int u : neighbors_[v])
          if (val_[u] == -1 && !assign(u, 0)) return false;
        for (int b : member_of_[v])
          for (int k : bases_.bases[b])
            if (val_[k] == -1 && !assign(k, 0)) return false;
      } else {
        for (int b : member_of_[v]) {
          const int size = static_cast<int>(bases_.bases[b].size());
          if (ones_[b] == 0 && zeros_[b] == size - 1)
            for (int k : bases_.bases[b])
              if (val_[k] == -1 && !assign(k, 1)) return false;
        }
      }
    }
    return true;
  }

  void undo_to(size_t mark) {
    while (trail_.size() > mark) {
      const int v = trail_.back();
      trail_.pop_back();
      for (int b : member_of_[v]) (val_[v] == 1 ? ones_[b] : zeros_[b])--;
      val_[v] = -1;
    }
  }

  W optimistic_extra() const {
    W extra{};
    for (int k = 1; k <= mu_; ++k) {
      if (val_[k] != -1) continue;
      W gain = c_.linear[k];
      for (const auto& [u, w] : c_.incident[k])
        if (val_[u] == 1) gain += w;
      if (gain > W{}) extra += gain;
    }
    for (const auto& q : c_.quads)
      if (val_[q.i] == -1 && val_[q.j] == -1 && q.w > W{}) extra += q.w;
    return extra;
  }

  void dfs() {
    ++out_.nodes;
    int v = 1;
    while (v <= mu_ && val_[v] != -1) ++v;
    if (v > mu_) {
      if (restr_ == Restriction::ks_violating && violations_ == 0) return;
      if (!out_.feasible || cur_ > out_.best) {
        out_.feasible = true;
        out_.best = cur_;
        out_.argmax.assign(mu_, 0);
        for (int k = 1; k <= mu_; ++k) out_.argmax[k - 1] = static_cast<std::uint8_t>(val_[k]);
      }
      return;
    }
    if (out_.feasible) {
      W bound = cur_;
      bound += optimistic_extra();
      if (!(bound > out_.best)) return;
    }
    for (int x : {0, 1}) {
      const size_t mark = trail_.size();
      const W saved_cur = cur_;
      const int saved_viol = violations_;
      if (assign(v, x)) dfs();
      undo_to(mark);
      cur_ = saved_cur;
      violations_ = saved_viol;
    }
  }

  const CompiledValue<W>& c_;
  const BasisList& bases_;
  Restriction restr_;
  int mu_;
  std::vector<int8_t> val_;
  std::vector<int> trail_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> member_of_;
  std::vector<int> ones_, zeros_;
  int violations_ = 0;
  W cur_{};
  RawMax<W> out_;
};

template <class W>
ClassMaximum finish_max(RawMax<W>&& raw, const BigInt& den) {
  ClassMaximum out;
  out.feasible = raw.feasible;
  out.nodes = raw.nodes;
  if (raw.feasible) {
    if constexpr (std::is_same_v<W, Rational>) {
      out.value = raw.best;
    } else {
      out.value = Rational(BigInt(raw.best), den);
    }
    out.argmax = std::move(raw.argmax);
  }
  return out;
}

}  // namespace detail

/// Exact maximum of evaluate(expr, ., lambda) over the given class, with the
/// lex-smallest attaining assignment, or feasible=false when the class is
/// empty (KS-obeying on a KS set; KS-violating when every assignment obeys).
inline ClassMaximum max_over_assignments(const Expression& expr, const OrthogonalityGraph& g,
                                         const BasisList& bases, Restriction r,
                                         const Rational& lambda,
                                         SearchStrategy strategy = SearchStrategy::automatic) {
  if (expr.vars != VarKind::projector)
    throw InputError("assignment search runs on the projector form");
  if (expr.universe != g.vertex_count)
    throw InputError("expression universe does not match ray count");
  const int mu = g.vertex_count;
  if (strategy == SearchStrategy::automatic)
    strategy = mu <= kExhaustiveMaxMu ? SearchStrategy::exhaustive
                                      : SearchStrategy::branch_and_bound;
  if (strategy == SearchStrategy::exhaustive && mu > kExhaustiveMaxMu)
    throw InputError("exhaustive enumeration supports at most mu = " +
                     std::to_string(kExhaustiveMaxMu));

  std::vector<Rational> coefs;
  std::vector<std::pair<int, int>> quad_keys;
  detail::flatten_at_lambda(expr, lambda, coefs, quad_keys);

  if (auto c64 = detail::compile_int64(coefs, mu, quad_keys)) {
    if (strategy == SearchStrategy::exhaustive) {
      detail::ClassMasks masks(g, bases);
      return detail::finish_max(detail::exhaustive_max(*c64, mu, masks, r), c64->den);
    }
    detail::BranchAndBound<long long> engine(*c64, g, bases, r);
    return detail::finish_max(engine.run(), c64->den);
  }
  auto cr = detail::compile_rational(coefs, mu, quad_keys);
  if (strategy == SearchStrategy::exhaustive) {
    detail::ClassMasks masks(g, bases);
    return detail::finish_max(detail::exhaustive_max(cr, mu, masks, r), BigInt(1));
  }
  detail::BranchAndBound<Rational> engine(cr, g, bases, r);
  return detail::finish_max(engine.run(), BigInt(1));
}

/// f = max F over KS-obeying assignments, f' = max over KS-violating.
inline BoundsReport compute_bounds(const Expression& F, const OrthogonalityGraph& g,
                                   const BasisList& bases,
                                   SearchStrategy strategy = SearchStrategy::automatic) {
  if (!lambda_free(F)) throw InputError("bounds f and f' apply to a lambda-free functional");
  BoundsReport r;
  r.ks = max_over_assignments(F, g, bases, Restriction::ks_obeying, Rational(0), strategy);
  r.exks = max_over_assignments(F, g, bases, Restriction::ks_violating, Rational(0), strategy);
  return r;
}

/// Keeps exactly the lines that attain the pointwise maximum somewhere on
/// lambda in (0, inf); lines touching only at a single point survive.
inline std::vector<Affine> prune_upper_envelope(std::vector<Affine> lines) {
  std::sort(lines.begin(), lines.end());
  lines.erase(std::unique(lines.begin(), lines.end()), lines.end());
  // same slope: only the highest intercept can matter
  std::vector<Affine> top;
  for (const auto& l : lines) {
    if (!top.empty() && top.back().slope == l.slope)
      top.back() = l;  // sorted ascending, so later intercept is larger
    else
      top.push_back(l);
  }
  std::vector<Affine> kept;
  for (size_t i = 0; i < top.size(); ++i) {
    Rational lo(0);
    bool has_hi = false;
    Rational hi;
    bool empty = false;
    for (size_t j = 0; j < top.size() && !empty; ++j) {
      if (j == i) continue;
      const Rational ds = top[j].slope - top[i].slope;
      const Rational di = top[i].intercept - top[j].intercept;
      if (ds > 0) {
        Rational bound = di / ds;  // lambda <= bound
        if (!has_hi || bound < hi) {
          hi = bound;
          has_hi = true;
        }
      } else {
        Rational bound = di / ds;  // ds < 0: lambda >= bound
        if (bound > lo) lo = bound;
      }
      if (has_hi && (hi <= 0 || lo > hi)) empty = true;
    }
    if (!empty) kept.push_back(top[i]);
  }
  return kept;
}

/// Values of an expression over an assignment class, as lines in lambda.
struct BoundEnvelope {
  bool feasible = true;
  std::vector<Affine> attained;  // distinct realized lines (sorted)
  std::vector<Affine> lines;     // upper envelope on lambda in (0, inf)
  // One attaining assignment per envelope line (lex-smallest on the
  // exhaustive path). Empty for analytic envelopes whose lines need not be
  // attained (the relaxed bound).
  std::vector<Assignment> witnesses;

  Rational value_at(const Rational& lambda) const {
    if (!feasible || lines.empty()) throw Error("bound envelope of an empty assignment class");
    Rational best = lines.front().at(lambda);
    for (size_t k = 1; k < lines.size(); ++k) {
      Rational v = lines[k].at(lambda);
      if (v > best) best = v;
    }
    return best;
  }
};

namespace detail {

template <class W>
struct CompiledPair {
  BigInt den_s{1}, den_i{1};
  CompiledValue<W> slope, intercept;
};

inline BoundEnvelope envelope_exhaustive(const Expression& expr, const OrthogonalityGraph& g,
                                         const BasisList& bases, Restriction r) {
  const int mu = g.vertex_count;
  std::vector<Rational> slope_coefs, inter_coefs;
  std::vector<std::pair<int, int>> quad_keys, quad_keys2;
  // flatten slope and intercept parts separately
  slope_coefs.assign(mu + 1, Rational(0));
  inter_coefs.assign(mu + 1, Rational(0));
  slope_coefs[0] = expr.constant.slope;
  inter_coefs[0] = expr.constant.intercept;
  for (const auto& [i, c] : expr.linear) {
    slope_coefs[i] = c.slope;
    inter_coefs[i] = c.intercept;
  }
  for (const auto& [p, c] : expr.quadratic) {
    quad_keys.push_back(p);
    slope_coefs.push_back(c.slope);
    inter_coefs.push_back(c.intercept);
  }
  quad_keys2 = quad_keys;

  ClassMasks masks(g, bases);
  BoundEnvelope env;
  std::map<Affine, std::uint32_t> witness_masks;  // line -> lex-min attaining mask

  auto run = [&](const auto& cs, const auto& ci, const BigInt& den_s, const BigInt& den_i) {
    using W = std::decay_t<decltype(cs.constant)>;
    std::map<std::pair<W, W>, std::uint32_t> seen;
    const std::uint32_t end = mu >= 32 ? 0 : (1u << mu);
    for (std::uint32_t mask = 0; mask != end; ++mask) {
      if (!masks.in_class(mask, r)) continue;
      W s = cs.constant, t = ci.constant;
      for (int i = 1; i <= mu; ++i)
        if ((mask >> (i - 1)) & 1u) {
          s += cs.linear[i];
          t += ci.linear[i];
        }
      for (size_t q = 0; q < cs.quads.size(); ++q) {
        const auto& qk = cs.quads[q];
        if (((mask >> (qk.i - 1)) & (mask >> (qk.j - 1))) & 1u) {
          s += qk.w;
          t += ci.quads[q].w;
        }
      }
      auto [it, fresh] = seen.emplace(std::make_pair(std::move(s), std::move(t)), mask);
      if (!fresh && mask_lex_less(mask, it->second)) it->second = mask;
    }
    env.feasible = !seen.empty();
    for (const auto& [line, mask] : seen) {
      Affine a;
      if constexpr (std::is_same_v<W, Rational>)
        a = Affine{line.first, line.second};
      else
        a = Affine{Rational(BigInt(line.first), den_s), Rational(BigInt(line.second), den_i)};
      env.attained.push_back(a);
      witness_masks.emplace(std::move(a), mask);
    }
  };

  auto cs64 = compile_int64(slope_coefs, mu, quad_keys);
  auto ci64 = compile_int64(inter_coefs, mu, quad_keys2);
  if (cs64 && ci64) {
    run(*cs64, *ci64, cs64->den, ci64->den);
  } else {
    run(compile_rational(slope_coefs, mu, quad_keys), compile_rational(inter_coefs, mu, quad_keys2),
        BigInt(1), BigInt(1));
  }
  std::sort(env.attained.begin(), env.attained.end());
  env.lines = prune_upper_envelope(env.attained);
  for (const auto& l : env.lines)
    env.witnesses.push_back(assignment_from_mask(witness_masks.at(l), mu));
  return env;
}

// Support-line recursion for mu beyond exhaustive range: finds every line of
// the upper envelope that is maximal on an interval of positive length (lines
// touching the envelope at a single point may be absent).
inline BoundEnvelope envelope_parametric(const Expression& expr, const OrthogonalityGraph& g,
                                         const BasisList& bases, Restriction r) {
  Rational slope_reach(0), inter_reach(0);
  BigInt den_s = 1, den_i = 1;
  auto absorb = [&](const Affine& c) {
    slope_reach += c.slope < 0 ? Rational(-c.slope) : c.slope;
    inter_reach += c.intercept < 0 ? Rational(-c.intercept) : c.intercept;
    den_s = boost::multiprecision::lcm(den_s, denominator(c.slope));
    den_i = boost::multiprecision::lcm(den_i, denominator(c.intercept));
  };
  absorb(expr.constant);
  for (const auto& [i, c] : expr.linear) absorb(c);
  for (const auto& [p, c] : expr.quadratic) absorb(c);

  // Distinct attained slopes differ by at least 1/den_s and intercepts span
  // at most 2*inter_reach, so beyond lambda_big the value order equals the
  // (slope, intercept) lex order; symmetrically below lambda_small.
  const Rational lambda_big = Rational(den_s) * (2 * inter_reach + 1);
  const Rational lambda_small = Rational(1) / (Rational(den_i) * (2 * slope_reach + 1));

  auto query = [&](const Rational& lam) {
    auto m = max_over_assignments(expr, g, bases, r, lam, SearchStrategy::branch_and_bound);
    return m;
  };

  BoundEnvelope env;
  std::map<Affine, Assignment> witness_of;
  auto line_of = [&](const ClassMaximum& m) {
    Affine l = evaluate_line(expr, m.argmax);
    witness_of.emplace(l, m.argmax);
    return l;
  };

  auto first = query(lambda_small);
  if (!first.feasible) {
    env.feasible = false;
    return env;
  }
  auto last = query(lambda_big);
  const Affine l_lo = line_of(first);
  const Affine l_hi = line_of(last);

  std::vector<Affine> found;
  auto rec = [&](auto&& self, const Rational& la, const Affine& fa, const Rational& lb,
                 const Affine& fb) -> void {
    if (fa == fb) {
      found.push_back(fa);
      return;
    }
    const Rational lx = (fa.intercept - fb.intercept) / (fb.slope - fa.slope);
    if (!(lx > la) || !(lx < lb)) {
      found.push_back(fa);
      found.push_back(fb);
      return;
    }
    auto m = query(lx);
    if (m.value == fa.at(lx)) {
      found.push_back(fa);
      found.push_back(fb);
      return;
    }
    const Affine lm = line_of(m);
    self(self, la, fa, lx, lm);
    self(self, lx, lm, lb, fb);
  };
  rec(rec, lambda_small, l_lo, lambda_big, l_hi);

  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  env.attained = found;
  env.lines = prune_upper_envelope(std::move(found));
  for (const auto& l : env.lines) env.witnesses.push_back(witness_of.at(l));
  return env;
}

}  // namespace detail

/// The set of value lines realized by assignments in the class, pruned to the
/// upper envelope over lambda in (0, inf). Exhaustive for mu <= 24; above
/// that a support-line search via branch-and-bound maxima.
inline BoundEnvelope bound_envelope(const Expression& expr, const OrthogonalityGraph& g,
                                    const BasisList& bases, Restriction r) {
  if (expr.vars != VarKind::projector)
    throw InputError("assignment search runs on the projector form");
  if (expr.universe != g.vertex_count)
    throw InputError("expression universe does not match ray count");
  if (g.vertex_count <= kExhaustiveMaxMu)
    return detail::envelope_exhaustive(expr, g, bases, r);
  return detail::envelope_parametric(expr, g, bases, r);
}

}  // namespace ksnc
