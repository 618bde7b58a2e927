#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tangles/epsilon.hpp"
#include "tangles/ket.hpp"

namespace tangles {

// Convex and concave roof values of the same measure. For rank-2 states both
// are exact; the concave member is only meaningful when rank(rho) <= 2.
struct RootPair {
  double convex = 0.0;
  double concave = 0.0;
};

// Pair tangles of a three-party state plus the genuinely tripartite tangle.
// x = tau(B|C), y = tau(A|C), z = tau(A|B), t = tau(A|B|C); all in [0, 1].
struct TangleTuple {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double t = 0.0;
};

namespace detail {

inline RootPair checked_roots(double convex, double concave) {
  if (concave < convex - 1e-10) throw std::runtime_error("roof roots out of order");
  return {convex, concave};
}

struct WoottersAnalysis {
  std::vector<double> svals;  // descending, padded with zeros to dim(rho)
  int rank = 0;
};

// Spectral route: diagonalize rho, keep the columns above the rank cutoff,
// and read the measure off the theta-pairing of the weighted eigenbasis.
inline WoottersAnalysis wootters_analysis(const Matrix& rho, const EpsilonOperator& theta) {
  const std::size_t d = theta.dim();
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("wootters analysis: state dimension does not match theta");
  std::vector<double> w;
  Matrix V(d, d);
  hermitian_eigensystem(rho, w, V);
  WoottersAnalysis out;
  out.svals.assign(d, 0.0);
  if (w.empty() || w[0] <= 0.0) return out;
  const double cutoff = 1e-13 * w[0];
  std::size_t r = 0;
  while (r < d && w[r] > cutoff) ++r;
  out.rank = static_cast<int>(r);
  Matrix E(d, r);
  for (std::size_t j = 0; j < r; ++j) {
    const double s = std::sqrt(w[j]);
    for (std::size_t a = 0; a < d; ++a) E(a, j) = s * V(a, j);
  }
  Matrix TE(d, r);
  for (std::size_t a = 0; a < d; ++a)
    for (const auto& e : theta.row(a))
      for (std::size_t j = 0; j < r; ++j)
        TE(a, j) += static_cast<double>(e.sign) * E(e.col, j);
  // B_jk = phi_j^T Theta phi_k, complex symmetric; the measure's roots are
  // its singular values. (The transpose matters: conjugating one index gives
  // a Hermitian matrix whose spectrum is a different quantity entirely.)
  Matrix B(r, r);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t k = 0; k < r; ++k) {
      cplx acc = 0.0;
      for (std::size_t a = 0; a < d; ++a) acc += E(a, j) * TE(a, k);
      B(j, k) = acc;
    }
  const std::vector<double> s = singular_values(B);
  for (std::size_t i = 0; i < s.size() && i < d; ++i) out.svals[i] = s[i];
  return out;
}

inline RootPair roots_from_svals(const std::vector<double>& s) {
  double rest = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) rest += s[i];
  const double convex = std::max(s.empty() ? 0.0 : s[0] - rest, 0.0);
  const double concave = (s.size() >= 2) ? s[0] + s[1] : (s.empty() ? 0.0 : s[0]);
  return checked_roots(convex, concave);
}

}  // namespace detail

inline std::vector<double> wootters_svals(const Matrix& rho, const EpsilonOperator& theta) {
  return detail::wootters_analysis(rho, theta).svals;
}

// Roof roots from the eigenvalue-free route: R = rho Theta rho* Theta has
// trace l0^2 + l1^2 when rank(rho) <= 2, so both roots follow from Tr R and
// Tr R^2 alone.
inline RootPair rank2_fast_roots(const Matrix& rho, const EpsilonOperator& theta) {
  const std::size_t d = theta.dim();
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("rank2 roots: state dimension does not match theta");
  const Matrix rho_tilde = theta.as_matrix() * rho.conjugate() * theta.as_matrix();
  const Matrix R = rho * rho_tilde;
  const double a = R.trace().real();
  const double tr2 = (R * R).trace().real();
  const double q = std::max(2.0 * (a * a - tr2), 0.0);
  const double root_q = std::sqrt(q);
  const double convex = std::sqrt(std::max(a - root_q, 0.0));
  const double concave = std::sqrt(std::max(a + root_q, 0.0));
  return detail::checked_roots(convex, concave);
}

inline RootPair wootters_roots(const Matrix& rho, const EpsilonOperator& theta) {
  return detail::roots_from_svals(wootters_svals(rho, theta));
}

inline double one_tangle(const Ket& psi, int party) {
  const DensityMatrix d = partial_trace(psi, {party});
  const double det = d.rho(0, 0).real() * d.rho(1, 1).real() - std::norm(d.rho(0, 1));
  return 2.0 * std::sqrt(std::max(det, 0.0));
}

inline double two_tangle(const Ket& psi) {
  if (psi.n != 2) throw std::domain_error("two_tangle: pure overload expects 2 parties");
  return 2.0 * std::abs(psi.amps[0] * psi.amps[3] - psi.amps[1] * psi.amps[2]);
}

namespace detail {

inline double mixed_tangle_convex(const Matrix& rho, const EpsilonOperator& theta) {
  const WoottersAnalysis an = wootters_analysis(rho, theta);
  const double convex = roots_from_svals(an.svals).convex;
  if (an.rank <= 2) {
    // near rank-1 the trace route loses the small root to cancellation in
    // Tr(R)^2 - Tr(R^2), so sqrt(ulp) is the honest agreement scale
    const double fast = rank2_fast_roots(rho, theta).convex;
    if (std::abs(fast - convex) > 1e-8)
      throw std::runtime_error("mixed tangle: spectral and trace routes disagree");
    return convex;
  }
  return convex;
}

}  // namespace detail

inline double two_tangle(const DensityMatrix& d) {
  if (d.parties.size() != 2) throw std::domain_error("two_tangle: mixed overload expects 2 parties");
  return detail::mixed_tangle_convex(d.rho, build_theta(2, Parity::even));
}

// Concave roof of the pair tangle; defined here only for rank <= 2 states.
inline double two_tangle_assistance(const DensityMatrix& d) {
  if (d.parties.size() != 2)
    throw std::domain_error("two_tangle_assistance: expects 2 parties");
  const std::vector<double> w = hermitian_eigenvalues(d.rho);
  if (w.size() > 2 && w[2] >= 1e-9)
    throw std::domain_error("two_tangle_assistance: unsupported rank (needs rank <= 2)");
  const auto an = detail::wootters_analysis(d.rho, build_theta(2, Parity::even));
  return an.svals[0] + an.svals[1];
}

inline double k_tangle_mixed(const DensityMatrix& d) {
  const int k = static_cast<int>(d.parties.size());
  if (k % 2 != 0 || k < 2 || k > kMaxThetaParties)
    throw std::domain_error("k_tangle_mixed: requires an even party count in [2,6]");
  return detail::mixed_tangle_convex(d.rho, build_theta(k, Parity::even));
}

// Full-set tangle of a pure state. Even party count pairs the state with
// itself through Theta+; odd counts pair the doubled state through Theta-.
inline double k_tangle_pure(const Ket& psi) {
  const int k = psi.n;
  if (k < 2 || k > kMaxThetaParties)
    throw std::domain_error("k_tangle_pure: party count outside [2,6]");
  if (k % 2 == 0) {
    const EpsilonOperator& theta = build_theta(k, Parity::even);
    return std::abs(theta.bilinear(psi.amps, psi.amps));
  }
  const EpsilonOperator& theta = build_theta(k, Parity::odd);
  const std::size_t dim = psi.amps.size();
  std::vector<cplx> phi(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) phi[i * dim + j] = psi.amps[i] * psi.amps[j];
  return std::sqrt(2.0 * std::abs(theta.bilinear(phi, phi)));
}

// Literal epsilon-network contraction for three parties; slow but written
// exactly as the index sum, used to cross-check the operator routes.
inline double three_tangle(const Ket& psi) {
  if (psi.n != 3) throw std::domain_error("three_tangle: expects 3 parties");
  static constexpr int EPS[2][2] = {{0, 1}, {-1, 0}};
  const auto& p = psi.amps;
  cplx total = 0.0;
  for (int ii = 0; ii < 64; ++ii) {
    const int i0 = ii & 1, i1 = (ii >> 1) & 1, i2 = (ii >> 2) & 1;
    const int i3 = (ii >> 3) & 1, i4 = (ii >> 4) & 1, i5 = (ii >> 5) & 1;
    const int ea = EPS[i0][i3];
    if (ea == 0) continue;
    for (int jj = 0; jj < 64; ++jj) {
      const int j0 = jj & 1, j1 = (jj >> 1) & 1, j2 = (jj >> 2) & 1;
      const int j3 = (jj >> 3) & 1, j4 = (jj >> 4) & 1, j5 = (jj >> 5) & 1;
      const int e = ea * EPS[j0][j3] * EPS[i1][j1] * EPS[i2][j2] * EPS[i4][j4] * EPS[i5][j5];
      if (e == 0) continue;
      total += p[4 * j5 + 2 * j4 + j3] * p[4 * j2 + 2 * j1 + j0] * static_cast<double>(e) *
               p[4 * i5 + 2 * i4 + i3] * p[4 * i2 + 2 * i1 + i0];
    }
  }
  return std::sqrt(2.0 * std::abs(total));
}

// Cayley's 2x2x2 hyperdeterminant; the tripartite tangle is 2 sqrt|Hdet|.
inline cplx hyperdeterminant(const Ket& psi) {
  if (psi.n != 3) throw std::domain_error("hyperdeterminant: expects 3 parties");
  const auto& a = psi.amps;  // index 4*p0 + 2*p1 + p2
  const cplx d1 = a[0] * a[0] * a[7] * a[7] + a[1] * a[1] * a[6] * a[6] +
                  a[2] * a[2] * a[5] * a[5] + a[3] * a[3] * a[4] * a[4];
  const cplx d2 = a[0] * a[7] * (a[3] * a[4] + a[5] * a[2] + a[6] * a[1]) +
                  a[3] * a[4] * (a[5] * a[2] + a[6] * a[1]) + a[5] * a[2] * a[6] * a[1];
  const cplx d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
  return d1 - 2.0 * d2 + 4.0 * d3;
}

inline TangleTuple tangle_tuple(const Ket& psi) {
  if (psi.n != 3) throw std::domain_error("tangle_tuple: expects 3 parties");
  TangleTuple out;
  out.x = two_tangle(partial_trace(psi, {1, 2}));
  out.y = two_tangle(partial_trace(psi, {0, 2}));
  out.z = two_tangle(partial_trace(psi, {0, 1}));
  out.t = 2.0 * std::sqrt(std::abs(hyperdeterminant(psi)));
  return out;
}

struct ChainStep {
  double k_tangle = 0.0;  // full-set tangle with the removed party leading
  RootPair roots;         // convex/concave roofs of the traced state's tangle
  double defect = 0.0;    // |k_tangle^2 - (concave^2 - convex^2)|
};

// Descend from an odd pure k-tangle to the roof roots of the (k-1)-tangle of
// the state with `removed` traced out. The odd pairing distinguishes its
// first slot, so the removed party is rotated there before anything else.
inline ChainStep pure_k_to_km1(const Ket& psi, int removed, bool check = true) {
  const int k = psi.n;
  if (k != 3 && k != 5) throw std::domain_error("pure_k_to_km1: party count must be 3 or 5");
  if (removed < 0 || removed >= k) throw std::invalid_argument("pure_k_to_km1: party out of range");
  std::vector<int> perm;
  perm.push_back(removed);
  for (int p = 0; p < k; ++p)
    if (p != removed) perm.push_back(p);
  const Ket rotated = permute_parties(psi, perm);
  ChainStep out;
  out.k_tangle = k_tangle_pure(rotated);
  std::vector<int> keep(k - 1);
  for (int p = 1; p < k; ++p) keep[p - 1] = p;
  const DensityMatrix rest = partial_trace(rotated, keep);
  out.roots = wootters_roots(rest.rho, build_theta(k - 1, Parity::even));
  const double gap = out.roots.concave * out.roots.concave - out.roots.convex * out.roots.convex;
  out.defect = std::abs(out.k_tangle * out.k_tangle - gap);
  if (check && out.defect > 1e-8)
    throw std::runtime_error("pure_k_to_km1: chain identity violated beyond tolerance");
  return out;
}

// Roof roots of a state supported on span{|0...0>, |1...1>}: the convex roof
// is twice the coherence, the concave roof twice the geometric mean of the
// corner populations.
inline RootPair residual_tangle_ghz_block(const Matrix& block) {
  if (block.rows() != 2 || block.cols() != 2)
    throw std::domain_error("residual_tangle_ghz_block: block must be 2x2");
  const double alpha = block(0, 0).real();
  const double gamma = block(1, 1).real();
  const double beta = std::abs(block(0, 1));
  return detail::checked_roots(2.0 * beta, 2.0 * std::sqrt(std::max(alpha * gamma, 0.0)));
}

inline RootPair residual_tangle_ghz_block(const DensityMatrix& d) {
  const std::size_t dim = d.rho.rows();
  if (d.rho.cols() != dim || dim < 2)
    throw std::domain_error("residual_tangle_ghz_block: state must be square and nontrivial");
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const bool corner = (i == 0 || i == dim - 1) && (j == 0 || j == dim - 1);
      if (!corner && std::abs(d.rho(i, j)) >= 1e-9)
        throw std::domain_error("residual_tangle_ghz_block: invalid support off the corner block");
    }
  Matrix block(2, 2);
  block(0, 0) = d.rho(0, 0);
  block(0, 1) = d.rho(0, dim - 1);
  block(1, 0) = d.rho(dim - 1, 0);
  block(1, 1) = d.rho(dim - 1, dim - 1);
  return residual_tangle_ghz_block(block);
}

}  // namespace tangles
