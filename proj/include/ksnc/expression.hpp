#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ksnc/orthogonality.hpp"
#include "ksnc/rational.hpp"

namespace ksnc {

/// 0/1 valuation of the mu rays; values[i-1] is the value of P_i.
using Assignment = std::vector<std::uint8_t>;

inline Assignment assignment_from_mask(std::uint32_t mask, int mu) {
  Assignment a(mu, 0);
  for (int i = 0; i < mu; ++i) a[i] = (mask >> i) & 1u;
  return a;
}

/// Which dichotomic variables the expression ranges over: projectors P_i with
/// values {0,1}, or A_i = 1 - 2 P_i with values {+1,-1}.
enum class VarKind { projector, dichotomic };

/// Polynomial over {1, X_i, X_i X_j} with coefficients affine in lambda.
/// Canonical: zero coefficients absent, quadratic pairs stored with i < j.
struct Expression {
  VarKind vars = VarKind::projector;
  int universe = 0;  // mu
  Affine constant{};
  std::map<int, Affine> linear;
  std::map<std::pair<int, int>, Affine> quadratic;

  friend bool operator==(const Expression& a, const Expression& b) {
    return a.vars == b.vars && a.universe == b.universe && a.constant == b.constant &&
           a.linear == b.linear && a.quadratic == b.quadratic;
  }
};

inline Expression zero_expression(int universe, VarKind vars = VarKind::projector) {
  Expression e;
  e.vars = vars;
  e.universe = universe;
  return e;
}

inline void add_constant(Expression& e, const Affine& c) { e.constant += c; }

inline void add_linear(Expression& e, int i, const Affine& c) {
  if (i < 1 || i > e.universe)
    throw InputError("index " + std::to_string(i) + " outside universe 1.." +
                     std::to_string(e.universe));
  auto it = e.linear.find(i);
  if (it == e.linear.end()) {
    if (!c.is_zero()) e.linear.emplace(i, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) e.linear.erase(it);
  }
}

inline void add_quadratic(Expression& e, int i, int j, const Affine& c) {
  if (i == j) throw InputError("quadratic term needs two distinct indices, got P" +
                               std::to_string(i) + "*P" + std::to_string(i));
  if (i > j) std::swap(i, j);
  if (i < 1 || j > e.universe)
    throw InputError("pair {" + std::to_string(i) + "," + std::to_string(j) +
                     "} outside universe 1.." + std::to_string(e.universe));
  auto key = std::make_pair(i, j);
  auto it = e.quadratic.find(key);
  if (it == e.quadratic.end()) {
    if (!c.is_zero()) e.quadratic.emplace(key, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) e.quadratic.erase(it);
  }
}

inline bool lambda_free(const Expression& e) {
  if (!e.constant.lambda_free()) return false;
  for (const auto& [i, c] : e.linear)
    if (!c.lambda_free()) return false;
  for (const auto& [p, c] : e.quadratic)
    if (!c.lambda_free()) return false;
  return true;
}

/// lambda * e, for lambda-free e.
inline Expression times_lambda(const Expression& e) {
  if (!lambda_free(e)) throw InputError("expression is already affine in L; cannot multiply by L");
  Expression out = zero_expression(e.universe, e.vars);
  out.constant = Affine{e.constant.intercept, Rational(0)};
  for (const auto& [i, c] : e.linear) out.linear.emplace(i, Affine{c.intercept, Rational(0)});
  for (const auto& [p, c] : e.quadratic)
    out.quadratic.emplace(p, Affine{c.intercept, Rational(0)});
  return out;
}

/// Freezes lambda to a number; the result is lambda-free.
inline Expression substitute_lambda(const Expression& e, const Rational& lambda) {
  Expression out = zero_expression(e.universe, e.vars);
  out.constant = Affine{Rational(0), e.constant.at(lambda)};
  for (const auto& [i, c] : e.linear) {
    Affine v{Rational(0), c.at(lambda)};
    if (!v.is_zero()) out.linear.emplace(i, v);
  }
  for (const auto& [p, c] : e.quadratic) {
    Affine v{Rational(0), c.at(lambda)};
    if (!v.is_zero()) out.quadratic.emplace(p, v);
  }
  return out;
}

/// Every quadratic pair must be an orthogonality edge (products are formed
/// only for compatible observables).
inline void require_edges(const Expression& e, const OrthogonalityGraph& g) {
  if (e.universe != g.vertex_count)
    throw InputError("expression universe " + std::to_string(e.universe) +
                     " does not match ray count " + std::to_string(g.vertex_count));
  for (const auto& [p, c] : e.quadratic)
    if (!g.adjacent(p.first, p.second))
      throw InputError("pair {" + std::to_string(p.first) + "," + std::to_string(p.second) +
                       "} is not an orthogonal pair of this ray set");
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

/// Exact value as a function of lambda: slope*lambda + intercept.
inline Affine evaluate_line(const Expression& e, const Assignment& a) {
  if (static_cast<int>(a.size()) != e.universe)
    throw InputError("assignment length " + std::to_string(a.size()) + " != universe " +
                     std::to_string(e.universe));
  if (e.vars != VarKind::projector)
    throw InputError("0/1 assignments apply to the projector form; use rational values for A-form");
  for (auto v : a)
    if (v > 1) throw InputError("assignment entries must be 0 or 1");
  Affine acc = e.constant;
  for (const auto& [i, c] : e.linear)
    if (a[i - 1]) acc += c;
  for (const auto& [p, c] : e.quadratic)
    if (a[p.first - 1] && a[p.second - 1]) acc += c;
  return acc;
}

inline Rational evaluate(const Expression& e, const Assignment& a, const Rational& lambda) {
  return evaluate_line(e, a).at(lambda);
}

/// Evaluation under arbitrary rational variable values (works for both forms).
inline Affine evaluate_line_values(const Expression& e, const std::vector<Rational>& values) {
  if (static_cast<int>(values.size()) != e.universe)
    throw InputError("value vector length does not match universe");
  Affine acc = e.constant;
  for (const auto& [i, c] : e.linear) acc += c * values[i - 1];
  for (const auto& [p, c] : e.quadratic) {
    Rational prod = values[p.first - 1];
    prod *= values[p.second - 1];
    acc += c * prod;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// P <-> A change of variables: P_i = (1 - A_i)/2, A_i = 1 - 2 P_i
// ---------------------------------------------------------------------------

inline Expression to_A_form(const Expression& e) {
  if (e.vars != VarKind::projector) throw InputError("expression is already in A-form");
  Expression out = zero_expression(e.universe, VarKind::dichotomic);
  const Rational half(1, 2), quarter(1, 4);
  add_constant(out, e.constant);
  for (const auto& [i, c] : e.linear) {
    add_constant(out, c * half);
    add_linear(out, i, -(c * half));
  }
  for (const auto& [p, c] : e.quadratic) {
    const Affine q = c * quarter;
    add_constant(out, q);
    add_linear(out, p.first, -q);
    add_linear(out, p.second, -q);
    add_quadratic(out, p.first, p.second, q);
  }
  return out;
}

inline Expression from_A_form(const Expression& e) {
  if (e.vars != VarKind::dichotomic) throw InputError("expression is not in A-form");
  Expression out = zero_expression(e.universe, VarKind::projector);
  const Rational two(2), four(4);
  add_constant(out, e.constant);
  for (const auto& [i, c] : e.linear) {
    add_constant(out, c);
    add_linear(out, i, -(c * two));
  }
  for (const auto& [p, c] : e.quadratic) {
    add_constant(out, c);
    add_linear(out, p.first, -(c * two));
    add_linear(out, p.second, -(c * two));
    add_quadratic(out, p.first, p.second, c * four);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text form
//
// expr   := [sign] term { sign term }
// term   := factor { '*' factor }         ('*' optional after a number)
// factor := rational | 'L' | 'P'<index> | 'A'<index>
//
// A term may contain at most one L and at most two distinct variable
// indices. Canonical output is whitespace-free with terms ordered constant,
// linear ascending, quadratic lexicographic; per slot the L-part precedes the
// plain part.
// ---------------------------------------------------------------------------

namespace detail {

struct ExprParser {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos == text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  [[noreturn]] void fail(const std::string& what) {
    throw InputError("expression syntax error at position " + std::to_string(pos) + ": " + what);
  }

  Rational read_number() {
    skip_ws();
    std::string num;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      num.push_back(text[pos++]);
    if (num.empty()) fail("expected a number");
    if (pos < text.size() && text[pos] == '/') {
      ++pos;
      std::string den;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        den.push_back(text[pos++]);
      if (den.empty()) fail("expected a denominator after '/'");
      BigInt d(den);
      if (d == 0) fail("zero denominator");
      return Rational(BigInt(num), d);
    }
    return Rational(BigInt(num));
  }

  int read_index() {
    std::string num;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      num.push_back(text[pos++]);
    if (num.empty()) fail("expected a variable index");
    if (num.size() > 9) fail("variable index too large");
    return std::stoi(num);
  }

  struct Term {
    Rational coef{1};
    int lambda_degree = 0;
    std::vector<int> indices;
    bool saw_projector = false;
    bool saw_dichotomic = false;
  };

  Term read_term() {
    Term t;
    bool expect_factor = true;
    while (true) {
      skip_ws();
      if (pos >= text.size()) break;
      char c = text[pos];
      if (c == '+' || c == '-') break;
      if (c == '*') {
        if (expect_factor) fail("unexpected '*'");
        ++pos;
        expect_factor = true;
        continue;
      }
      bool after_number = false;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        if (!expect_factor) fail("unexpected number; use '*' between factors");
        t.coef *= read_number();
        expect_factor = false;
        after_number = true;
        // implicit product in forms like "2L" or "3P1"
        skip_ws();
        if (pos < text.size() && (text[pos] == 'L' || text[pos] == 'P' || text[pos] == 'A'))
          expect_factor = true;
        if (!expect_factor) continue;
        c = pos < text.size() ? text[pos] : '\0';
      }
      if (c == 'L') {
        if (!expect_factor && !after_number) fail("unexpected 'L'; use '*' between factors");
        ++pos;
        if (++t.lambda_degree > 1) fail("terms may be at most linear in L");
        expect_factor = false;
      } else if (c == 'P' || c == 'A') {
        if (!expect_factor && !after_number) fail("unexpected variable; use '*' between factors");
        ++pos;
        int idx = read_index();
        for (int seen : t.indices)
          if (seen == idx)
            fail("repeated variable index " + std::to_string(idx) + " in one term");
        if (t.indices.size() >= 2) fail("terms may involve at most two variables");
        t.indices.push_back(idx);
        (c == 'P' ? t.saw_projector : t.saw_dichotomic) = true;
        expect_factor = false;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
    }
    if (expect_factor) fail("expected a factor");
    return t;
  }
};

inline void append_monomial(std::string& out, const Rational& coef, bool with_lambda,
                            const std::vector<int>& indices, char symbol, bool first) {
  std::string body;
  const Rational mag = coef < 0 ? Rational(-coef) : coef;
  const bool unit = mag == 1 && (with_lambda || !indices.empty());
  if (!unit) body += to_string(mag);
  if (with_lambda) {
    if (!body.empty()) body += '*';
    body += 'L';
  }
  for (int i : indices) {
    if (!body.empty()) body += '*';
    body += symbol;
    body += std::to_string(i);
  }
  if (body.empty()) body = "1";
  if (coef < 0)
    out += '-';
  else if (!first)
    out += '+';
  out += body;
}

inline void append_slot(std::string& out, const Affine& c, const std::vector<int>& indices,
                        char symbol) {
  if (!c.slope.is_zero()) append_monomial(out, c.slope, true, indices, symbol, out.empty());
  if (!c.intercept.is_zero()) append_monomial(out, c.intercept, false, indices, symbol, out.empty());
}

}  // namespace detail

inline Expression parse_expression(std::string_view text, int universe,
                                   const OrthogonalityGraph* graph = nullptr) {
  if (universe < 0) throw InputError("universe size must be nonnegative");
  detail::ExprParser p{text};
  Expression e = zero_expression(universe);
  bool saw_projector = false, saw_dichotomic = false;
  bool first = true;
  while (!p.at_end()) {
    Rational sign(1);
    char c = p.peek();
    if (c == '+' || c == '-') {
      ++p.pos;
      if (c == '-') sign = -1;
    } else if (!first) {
      p.fail("expected '+' or '-' between terms");
    }
    auto t = p.read_term();
    saw_projector |= t.saw_projector;
    saw_dichotomic |= t.saw_dichotomic;
    if (saw_projector && saw_dichotomic)
      throw InputError("expression mixes P and A variables");
    Rational coef = t.coef * sign;
    Affine a = t.lambda_degree ? Affine{coef, Rational(0)} : Affine{Rational(0), coef};
    if (t.indices.empty())
      add_constant(e, a);
    else if (t.indices.size() == 1)
      add_linear(e, t.indices[0], a);
    else
      add_quadratic(e, t.indices[0], t.indices[1], a);
    first = false;
  }
  if (first) throw InputError("empty expression");
  e.vars = saw_dichotomic ? VarKind::dichotomic : VarKind::projector;
  if (graph) {
    if (e.vars != VarKind::projector)
      throw InputError("orthogonality validation applies to the projector form");
    require_edges(e, *graph);
  }
  return e;
}

/// Canonical text; parse_expression(to_string(e), e.universe) == e.
inline std::string to_string(const Expression& e) {
  const char symbol = e.vars == VarKind::projector ? 'P' : 'A';
  std::string out;
  detail::append_slot(out, e.constant, {}, symbol);
  for (const auto& [i, c] : e.linear) detail::append_slot(out, c, {i}, symbol);
  for (const auto& [p, c] : e.quadratic)
    detail::append_slot(out, c, {p.first, p.second}, symbol);
  if (out.empty()) out = "0";
  return out;
}

}  // namespace ksnc
