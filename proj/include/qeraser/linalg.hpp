// linalg.hpp
// Small dense complex-matrix kernel used by the rest of the library:
// row-major square matrices, products, adjoints, PSD checks and the
// dominant eigenvalue of hermitian positive matrices.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qeraser/common.hpp"
#include "qeraser/random.hpp"

namespace qeraser {

struct CMatrix {
  std::size_t n = 0;
  std::vector<cplx> a;  // row-major, n*n entries

  CMatrix() = default;
  explicit CMatrix(std::size_t dim) : n(dim), a(dim * dim, cplx(0.0, 0.0)) {}
  CMatrix(std::size_t dim, std::vector<cplx> entries) : n(dim), a(std::move(entries)) {
    if (a.size() != n * n) throw contract_error("CMatrix: entry count does not match dimension");
  }

  cplx& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

  static CMatrix identity(std::size_t dim) {
    CMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
  }
};

inline CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  if (x.n != y.n) throw contract_error("matrix product: dimension mismatch");
  CMatrix r(x.n);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t k = 0; k < x.n; ++k) {
      const cplx xik = x.at(i, k);
      if (xik == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < x.n; ++j) r.at(i, j) += xik * y.at(k, j);
    }
  return r;
}

inline std::vector<cplx> operator*(const CMatrix& m, const std::vector<cplx>& v) {
  if (m.n != v.size()) throw contract_error("matrix-vector product: dimension mismatch");
  std::vector<cplx> r(m.n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) r[i] += m.at(i, j) * v[j];
  return r;
}

inline CMatrix dagger(const CMatrix& m) {
  CMatrix r(m.n);
  for (std::size_t i = 0; i < m.n; ++i)
    for (std::size_t j = 0; j < m.n; ++j) r.at(j, i) = std::conj(m.at(i, j));
  return r;
}

inline double max_abs(const CMatrix& m) {
  double mx = 0.0;
  for (const cplx& z : m.a) mx = std::max(mx, std::abs(z));
  return mx;
}

inline double max_abs_diff(const CMatrix& x, const CMatrix& y) {
  if (x.n != y.n) throw contract_error("max_abs_diff: dimension mismatch");
  double mx = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) mx = std::max(mx, std::abs(x.a[i] - y.a[i]));
  return mx;
}

inline cplx trace(const CMatrix& m) {
  cplx t(0.0, 0.0);
  for (std::size_t i = 0; i < m.n; ++i) t += m.at(i, i);
  return t;
}

inline bool is_unitary_matrix(const CMatrix& m, double tolerance = tol::structural) {
  return max_abs_diff(dagger(m) * m, CMatrix::identity(m.n)) <= tolerance;
}

inline bool is_hermitian_matrix(const CMatrix& m, double tolerance = tol::structural) {
  return max_abs_diff(m, dagger(m)) <= tolerance;
}

inline bool is_projector_matrix(const CMatrix& m, double tolerance = tol::structural) {
  return is_hermitian_matrix(m, tolerance) && max_abs_diff(m * m, m) <= tolerance;
}

// Cholesky-based test that every eigenvalue of a hermitian matrix is
// >= -slack: attempts the factorization of m + slack*I.
inline bool is_psd_within(const CMatrix& m, double slack) {
  const std::size_t n = m.n;
  CMatrix l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = m.at(j, j).real() + slack;
    for (std::size_t k = 0; k < j; ++k) diag -= std::norm(l.at(j, k));
    if (!(diag >= 0.0)) return false;
    const double ljj = std::sqrt(diag);
    l.at(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = m.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l.at(i, k) * std::conj(l.at(j, k));
      if (ljj == 0.0) {
        // zero pivot: column must vanish too, or the matrix dips below -slack
        if (std::abs(s) > 16.0 * slack + 1e-300) return false;
        l.at(i, j) = cplx(0.0, 0.0);
      } else {
        l.at(i, j) = s / ljj;
      }
    }
  }
  return true;
}

// Largest eigenvalue of a hermitian PSD matrix. 2x2 closed form, power
// iteration otherwise (fine at the dimensions this library works at).
inline double max_eigenvalue_psd(const CMatrix& m) {
  if (m.n == 0) throw contract_error("max_eigenvalue_psd: empty matrix");
  if (m.n == 1) return m.at(0, 0).real();
  if (m.n == 2) {
    const double a = m.at(0, 0).real();
    const double d = m.at(1, 1).real();
    const double b2 = std::norm(m.at(0, 1));
    const double mean = 0.5 * (a + d);
    const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b2);
    return mean + disc;
  }
  SplitMix64 rng(0x9d2c5680ULL);
  std::vector<cplx> v(m.n);
  for (auto& z : v) z = rng.next_complex_normal();
  double lambda = 0.0;
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<cplx> w = m * v;
    double nw = 0.0;
    for (const cplx& z : w) nw += std::norm(z);
    nw = std::sqrt(nw);
    if (nw == 0.0) return 0.0;
    for (auto& z : w) z /= nw;
    cplx ray(0.0, 0.0);
    std::vector<cplx> mw = m * w;
    for (std::size_t i = 0; i < m.n; ++i) ray += std::conj(w[i]) * mw[i];
    const double next = ray.real();
    v = std::move(w);
    if (iter > 3 && std::abs(next - lambda) <= 1e-14 * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

// Haar-ish random unitary from a complex Ginibre matrix via modified
// Gram-Schmidt with one reorthogonalization pass.
inline CMatrix random_unitary(std::size_t dim, SplitMix64& rng) {
  CMatrix g(dim);
  for (auto& z : g.a) z = rng.next_complex_normal();
  // orthonormalize columns
  for (std::size_t j = 0; j < dim; ++j) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        cplx proj(0.0, 0.0);
        for (std::size_t i = 0; i < dim; ++i) proj += std::conj(g.at(i, k)) * g.at(i, j);
        for (std::size_t i = 0; i < dim; ++i) g.at(i, j) -= proj * g.at(i, k);
      }
    }
    double nrm = 0.0;
    for (std::size_t i = 0; i < dim; ++i) nrm += std::norm(g.at(i, j));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) {
      // essentially impossible for Ginibre draws; restart the column
      for (std::size_t i = 0; i < dim; ++i) g.at(i, j) = rng.next_complex_normal();
      --j;
      continue;
    }
    for (std::size_t i = 0; i < dim; ++i) g.at(i, j) /= nrm;
  }
  return g;
}

}  // namespace qeraser
