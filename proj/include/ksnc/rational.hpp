#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "ksnc/errors.hpp"

namespace ksnc {

// Exact arbitrary-precision rational. All classical bounds are computed in
// this type; floating point appears only on the quantum side.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "p", "p/q" or a plain decimal like "0.25" into an exact rational.
inline Rational parse_rational(std::string_view text) {
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto digits = [&]() -> std::string {
    std::string d;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      d.push_back(text[pos++]);
    return d;
  };

  skip_ws();
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string ipart = digits();
  if (ipart.empty()) throw InputError("invalid rational: '" + std::string(text) + "'");

  Rational value;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    std::string den = digits();
    if (den.empty()) throw InputError("invalid rational: '" + std::string(text) + "'");
    BigInt d(den);
    if (d == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    value = Rational(BigInt(ipart), d);
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    std::string frac = digits();
    if (frac.empty()) throw InputError("invalid rational: '" + std::string(text) + "'");
    BigInt scale = 1;
    for (size_t k = 0; k < frac.size(); ++k) scale *= 10;
    value = Rational(BigInt(ipart) * scale + BigInt(frac), scale);
  } else {
    value = Rational(BigInt(ipart));
  }
  skip_ws();
  if (pos != text.size()) throw InputError("invalid rational: '" + std::string(text) + "'");
  return negative ? Rational(-value) : value;
}

/// "p" when integral, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  std::string s = numerator(r).str();
  if (denominator(r) != 1) {
    s += '/';
    s += denominator(r).str();
  }
  return s;
}

/// A value affine in the free parameter lambda: slope*lambda + intercept.
/// Doubles as an expression coefficient and as a bound-envelope line.
struct Affine {
  Rational slope{};
  Rational intercept{};

  Rational at(const Rational& lambda) const {
    Rational v = slope;
    v *= lambda;
    v += intercept;
    return v;
  }
  bool is_zero() const { return slope.is_zero() && intercept.is_zero(); }
  bool lambda_free() const { return slope.is_zero(); }

  Affine& operator+=(const Affine& o) {
    slope += o.slope;
    intercept += o.intercept;
    return *this;
  }
  Affine& operator-=(const Affine& o) {
    slope -= o.slope;
    intercept -= o.intercept;
    return *this;
  }
  Affine& operator*=(const Rational& r) {
    slope *= r;
    intercept *= r;
    return *this;
  }
  Affine operator-() const { return Affine{Rational(-slope), Rational(-intercept)}; }

  friend Affine operator+(Affine a, const Affine& b) { return a += b; }
  friend Affine operator-(Affine a, const Affine& b) { return a -= b; }
  friend Affine operator*(Affine a, const Rational& r) { return a *= r; }
  friend bool operator==(const Affine& a, const Affine& b) {
    return a.slope == b.slope && a.intercept == b.intercept;
  }
  friend bool operator!=(const Affine& a, const Affine& b) { return !(a == b); }
  // Ordering by (slope, intercept); used for canonical line lists.
  friend bool operator<(const Affine& a, const Affine& b) {
    if (a.slope != b.slope) return a.slope < b.slope;
    return a.intercept < b.intercept;
  }
};

/// Display form for envelope lines, e.g. "2L", "3L-1", "-1", "L+4".
inline std::string to_string(const Affine& a) {
  if (a.slope.is_zero()) return to_string(a.intercept);
  std::string s;
  if (a.slope == 1) {
    s = "L";
  } else if (a.slope == -1) {
    s = "-L";
  } else {
    s = to_string(a.slope) + "L";
  }
  if (!a.intercept.is_zero()) {
    if (a.intercept > 0) s += '+';
    s += to_string(a.intercept);
  }
  return s;
}

}  // namespace ksnc
