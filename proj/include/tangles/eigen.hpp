#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tangles/matrix.hpp"

namespace tangles {

inline constexpr std::size_t kMaxEigenDim = 64;

namespace detail {

// One cyclic sweep target: rotate rows/columns (p,q) of the Hermitian matrix A
// so that A(p,q) becomes zero, accumulating the same rotation into V.
// The rotation is W = diag(1, conj(f)) * G(theta) with f the phase of A(p,q),
// so the 2x2 subproblem is first made real symmetric and then diagonalized by
// the classic stable Jacobi angle.
inline void jacobi_rotate(Matrix& A, Matrix& V, std::size_t p, std::size_t q) {
  const std::size_t n = A.rows();
  const cplx apq = A(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const cplx f = apq / g;
  const double app = A(p, p).real();
  const double aqq = A(q, q).real();
  const double tau = (aqq - app) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const cplx fb = std::conj(f);

  // Column update: A <- A * W with W(p,p)=c, W(p,q)=s, W(q,p)=-fb*s, W(q,q)=fb*c.
  for (std::size_t i = 0; i < n; ++i) {
    const cplx aip = A(i, p), aiq = A(i, q);
    A(i, p) = c * aip - fb * s * aiq;
    A(i, q) = s * aip + fb * c * aiq;
  }
  // Row update: A <- W^dagger * A.
  for (std::size_t j = 0; j < n; ++j) {
    const cplx apj = A(p, j), aqj = A(q, j);
    A(p, j) = c * apj - f * s * aqj;
    A(q, j) = s * apj + f * c * aqj;
  }
  A(p, q) = 0.0;
  A(q, p) = 0.0;
  A(p, p) = A(p, p).real();
  A(q, q) = A(q, q).real();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx vip = V(i, p), viq = V(i, q);
    V(i, p) = c * vip - fb * s * viq;
    V(i, q) = s * vip + fb * c * viq;
  }
}

inline double off_diagonal_norm2(const Matrix& A) {
  double sum = 0.0;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j)
      if (i != j) sum += std::norm(A(i, j));
  return sum;
}

}  // namespace detail

// Cyclic Jacobi diagonalization of a Hermitian matrix. Deterministic, no
// dependence on thread count or allocation order. Eigenvalues come back in
// descending order with matching eigenvector columns (M = V diag(w) V^dagger).
inline void hermitian_eigensystem(const Matrix& M, std::vector<double>& w, Matrix& V,
                                  double herm_tol = 1e-10) {
  if (M.rows() != M.cols()) throw std::invalid_argument("eigensystem of non-square matrix");
  const std::size_t n = M.rows();
  if (n == 0 || n > kMaxEigenDim) throw std::invalid_argument("eigensystem dimension outside [1,64]");
  if (M.hermiticity_defect() > herm_tol * std::max(1.0, M.max_abs()))
    throw std::invalid_argument("matrix is not Hermitian within tolerance");

  // Symmetrize away the (tolerated) defect so the iteration sees an exactly
  // Hermitian operator.
  Matrix A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) A(i, j) = 0.5 * (M(i, j) + std::conj(M(j, i)));

  V = Matrix::identity(n);
  double scale = A.max_abs();
  if (scale == 0.0) scale = 1.0;
  const double stop = 1e-30 * scale * scale * static_cast<double>(n * n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (detail::off_diagonal_norm2(A) <= stop) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (std::abs(A(p, q)) > 1e-300) detail::jacobi_rotate(A, V, p, q);
  }

  w.resize(n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = A(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return diag[a] > diag[b]; });
  Matrix Vs(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = diag[order[j]];
    for (std::size_t i = 0; i < n; ++i) Vs(i, j) = V(i, order[j]);
  }
  V = Vs;
}

inline std::vector<double> hermitian_eigenvalues(const Matrix& M, double herm_tol = 1e-10) {
  std::vector<double> w;
  Matrix V;
  hermitian_eigensystem(M, w, V, herm_tol);
  return w;
}

// Singular values of a general complex matrix by one-sided Jacobi: orthogonalize
// the columns of a working copy; the singular values are the final column norms.
inline std::vector<double> singular_values(const Matrix& M) {
  Matrix G = M;
  const std::size_t nc = G.cols(), nr = G.rows();
  if (nc == 0 || nr == 0) return {};
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < nc; ++p)
      for (std::size_t q = p + 1; q < nc; ++q) {
        double a = 0.0, b = 0.0;
        cplx cpq = 0.0;
        for (std::size_t i = 0; i < nr; ++i) {
          a += std::norm(G(i, p));
          b += std::norm(G(i, q));
          cpq += std::conj(G(i, p)) * G(i, q);
        }
        const double g = std::abs(cpq);
        if (g <= 1e-15 * std::sqrt(a * b) || g == 0.0) continue;
        rotated = true;
        const cplx fb = std::conj(cpq / g);
        const double tau = (b - a) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < nr; ++i) {
          const cplx gip = G(i, p), giq = fb * G(i, q);
          G(i, p) = c * gip - s * giq;
          G(i, q) = s * gip + c * giq;
        }
      }
    if (!rotated) break;
  }
  std::vector<double> s(nc);
  for (std::size_t j = 0; j < nc; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < nr; ++i) col += std::norm(G(i, j));
    s[j] = std::sqrt(col);
  }
  std::sort(s.begin(), s.end(), std::greater<double>());
  return s;
}

struct Svd2 {
  double s0 = 0.0, s1 = 0.0;
  Matrix U{2, 2}, V{2, 2};  // M = U * diag(s0, s1) * V^dagger
};

// Full SVD of a 2x2 complex matrix, with unitary completion when the matrix
// is rank deficient.
inline Svd2 svd2x2(const Matrix& M) {
  if (M.rows() != 2 || M.cols() != 2) throw std::invalid_argument("svd2x2 needs a 2x2 matrix");
  Matrix G = M;
  Matrix V = Matrix::identity(2);
  for (int sweep = 0; sweep < 60; ++sweep) {
    double a = std::norm(G(0, 0)) + std::norm(G(1, 0));
    double b = std::norm(G(0, 1)) + std::norm(G(1, 1));
    cplx cpq = std::conj(G(0, 0)) * G(0, 1) + std::conj(G(1, 0)) * G(1, 1);
    const double g = std::abs(cpq);
    if (g <= 1e-16 * std::max(1e-300, std::sqrt(a * b))) break;
    const cplx fb = std::conj(cpq / g);
    const double tau = (b - a) / (2.0 * g);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    for (std::size_t i = 0; i < 2; ++i) {
      const cplx gip = G(i, 0), giq = fb * G(i, 1);
      G(i, 0) = c * gip - s * giq;
      G(i, 1) = s * gip + c * giq;
      const cplx vip = V(i, 0), viq = fb * V(i, 1);
      V(i, 0) = c * vip - s * viq;
      V(i, 1) = s * vip + c * viq;
    }
  }
  Svd2 r;
  double n0 = std::sqrt(std::norm(G(0, 0)) + std::norm(G(1, 0)));
  double n1 = std::sqrt(std::norm(G(0, 1)) + std::norm(G(1, 1)));
  std::size_t c0 = 0, c1 = 1;
  if (n1 > n0) {
    std::swap(n0, n1);
    std::swap(c0, c1);
  }
  r.s0 = n0;
  r.s1 = n1;
  for (std::size_t i = 0; i < 2; ++i) {
    r.V(i, 0) = V(i, c0);
    r.V(i, 1) = V(i, c1);
  }
  if (n0 > 0.0) {
    r.U(0, 0) = G(0, c0) / n0;
    r.U(1, 0) = G(1, c0) / n0;
  } else {
    r.U = Matrix::identity(2);
    return r;
  }
  if (n1 > 1e-14 * n0) {
    r.U(0, 1) = G(0, c1) / n1;
    r.U(1, 1) = G(1, c1) / n1;
  } else {
    r.s1 = n1;
    r.U(0, 1) = -std::conj(r.U(1, 0));
    r.U(1, 1) = std::conj(r.U(0, 0));
  }
  return r;
}

}  // namespace tangles
