#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "ksnc/errors.hpp"
#include "ksnc/ray_set.hpp"

namespace ksnc {

/// Dense square complex matrix, row-major. Only what the operator algebra
/// needs; dimensions here are tiny (n <= 16).
class Matrix {
 public:
  explicit Matrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, Complex(0.0, 0.0)) {
    if (n < 1) throw InputError("matrix dimension must be positive");
  }

  static Matrix identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }
  Complex& operator()(int r, int c) { return a_[static_cast<size_t>(r) * n_ + c]; }
  const Complex& operator()(int r, int c) const { return a_[static_cast<size_t>(r) * n_ + c]; }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(const Complex& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  /// this += s * o
  Matrix& add_scaled(const Matrix& o, const Complex& s) {
    check_same(o);
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += s * o.a_[k];
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Complex& s) { return a *= s; }
  friend Matrix operator*(const Complex& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    a.check_same(b);
    const int n = a.n_;
    Matrix out(n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex(0.0, 0.0)) continue;
        for (int j = 0; j < n; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  Matrix adjoint() const {
    Matrix out(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, std::abs(x));
    return m;
  }

  /// max |M(i,j) - conj(M(j,i))|
  double hermiticity_defect() const {
    double d = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j)
        d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return d;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& x : a_) s += std::norm(x);
    return std::sqrt(s);
  }

 private:
  void check_same(const Matrix& o) const {
    if (n_ != o.n_) throw InputError("matrix dimension mismatch");
  }
  int n_;
  std::vector<Complex> a_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  Matrix d = a;
  d -= b;
  return d.max_abs();
}

struct EigenSystem {
  std::vector<double> values;  // ascending
  Matrix vectors;              // columns, matching values
};

/// Cyclic Jacobi for Hermitian matrices. Each rotation first strips the phase
/// of the pivot entry, then applies the standard real 2x2 rotation; converges
/// when the off-diagonal Frobenius norm drops below off_tol (scaled by the
/// matrix magnitude).
inline EigenSystem jacobi_hermitian(Matrix a, double off_tol = 1e-12, int max_sweeps = 64) {
  const int n = a.size();
  if (a.hermiticity_defect() > 1e-12 * std::max(1.0, a.max_abs()))
    throw InputError("matrix is not Hermitian");
  Matrix q = Matrix::identity(n);
  const double tol = off_tol * std::max(1.0, a.frobenius());

  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < max_sweeps && off_norm() > tol; ++sweep) {
    for (int p = 0; p < n; ++p) {
      for (int qi = p + 1; qi < n; ++qi) {
        const Complex g = a(p, qi);
        const double r = std::abs(g);
        if (r == 0.0) continue;
        const Complex phase = g / r;  // e^{i phi}
        const double alpha = a(p, p).real();
        const double beta = a(qi, qi).real();
        const double tau = (beta - alpha) / (2.0 * r);
        const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex sp = s * phase;              // s e^{i phi}
        const Complex spc = s * std::conj(phase);  // s e^{-i phi}

        // A <- V+ A V with V = I except V(p,p)=c, V(p,q)=s,
        // V(q,p) = -s e^{-i phi}, V(q,q) = c e^{-i phi}.
        for (int k = 0; k < n; ++k) {  // columns
          const Complex akp = a(k, p), akq = a(k, qi);
          a(k, p) = c * akp - spc * akq;
          a(k, qi) = s * akp + c * std::conj(phase) * akq;
        }
        for (int k = 0; k < n; ++k) {  // rows
          const Complex apk = a(p, k), aqk = a(qi, k);
          a(p, k) = c * apk - sp * aqk;
          a(qi, k) = s * apk + c * phase * aqk;
        }
        a(p, qi) = a(qi, p) = 0.0;
        a(p, p) = Complex(a(p, p).real(), 0.0);
        a(qi, qi) = Complex(a(qi, qi).real(), 0.0);

        for (int k = 0; k < n; ++k) {  // eigenvector accumulation, Q <- Q V
          const Complex qkp = q(k, p), qkq = q(k, qi);
          q(k, p) = c * qkp - spc * qkq;
          q(k, qi) = s * qkp + c * std::conj(phase) * qkq;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });
  EigenSystem es{std::vector<double>(n), Matrix(n)};
  for (int c = 0; c < n; ++c) {
    es.values[c] = a(order[c], order[c]).real();
    for (int rw = 0; rw < n; ++rw) es.vectors(rw, c) = q(rw, order[c]);
  }
  return es;
}

struct EigenBounds {
  double min = 0.0;
  double max = 0.0;
  std::vector<Complex> max_eigenvector;  // unit vector
};

inline EigenBounds eigen_bounds(const Matrix& m) {
  const auto es = jacobi_hermitian(m);
  const int n = m.size();
  EigenBounds eb;
  eb.min = es.values.front();
  eb.max = es.values.back();
  eb.max_eigenvector.resize(n);
  double nrm = 0.0;
  for (int r = 0; r < n; ++r) {
    eb.max_eigenvector[r] = es.vectors(r, n - 1);
    nrm += std::norm(eb.max_eigenvector[r]);
  }
  nrm = std::sqrt(nrm);
  for (auto& x : eb.max_eigenvector) x /= nrm;
  return eb;
}

}  // namespace ksnc
