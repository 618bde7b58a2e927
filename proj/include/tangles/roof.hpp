#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "tangles/measures.hpp"

namespace tangles {

struct RoofSearchOptions {
  int two_term_points = 721;   // grid points per angle in the 2-term stage
  int three_term_points = 41;  // grid points per angle in the 3-term stage
  int refine_iters = 40;
};

namespace detail {

// All 2-term decompositions of a rank-2 state reduce to two angles: with
// W = [[c, s e^{ia}], [-s e^{-ia} p, c p]] (|p| = 1), each diagonal entry of
// W B W^T picks up only a unit row factor (p^2 on the second row), which the
// modulus discards, so the free row phase p never affects the objective.
struct TwoTermObjective {
  cplx b00, b01, b11;
  double operator()(double theta, double alpha) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const cplx e = std::polar(1.0, alpha);
    const cplx first = b00 * (c * c) + 2.0 * b01 * (c * s) * e + b11 * (s * s) * e * e;
    const cplx second = b00 * (s * s) - 2.0 * b01 * (c * s) * e + b11 * (c * c) * e * e;
    return std::abs(first) + std::abs(second);
  }
};

// 3-term decompositions from two chained plane rotations; theta2 = 0 embeds
// the 2-term family, so this stage can only widen the bracket.
struct ThreeTermObjective {
  cplx b00, b01, b11;
  double operator()(double t1, double a1, double t2, double a2) const {
    const double c1 = std::cos(t1), s1 = std::sin(t1);
    const double c2 = std::cos(t2), s2 = std::sin(t2);
    const cplx e1 = std::polar(1.0, a1), e2 = std::polar(1.0, a2);
    const cplx rows[3][2] = {{c1 * c2, s1 * e1},
                             {-s1 * std::conj(e1) * c2, c1},
                             {-s2 * std::conj(e2), 0.0}};
    double total = 0.0;
    for (const auto& v : rows)
      total += std::abs(b00 * v[0] * v[0] + 2.0 * b01 * v[0] * v[1] + b11 * v[1] * v[1]);
    return total;
  }
};

}  // namespace detail

// Decomposition search for the roof values of the even-k tangle on a rank-2
// state: dense angle grids bracketed by local refinement, over 2-term and
// 3-term decompositions. Returns {smallest found, largest found}.
inline RootPair convex_roof_bruteforce(const DensityMatrix& d,
                                       const RoofSearchOptions& opt = {}) {
  const int k = static_cast<int>(d.parties.size());
  if (k != 2 && k != 4) throw std::domain_error("convex_roof_bruteforce: party count must be 2 or 4");
  const EpsilonOperator& theta = build_theta(k, Parity::even);
  const std::size_t dim = theta.dim();
  if (d.rho.rows() != dim || d.rho.cols() != dim)
    throw std::invalid_argument("convex_roof_bruteforce: state dimension mismatch");
  std::vector<double> w;
  Matrix V(dim, dim);
  hermitian_eigensystem(d.rho, w, V);
  if (w.size() > 2 && w[2] >= 1e-9)
    throw std::domain_error("convex_roof_bruteforce: unsupported rank (needs rank <= 2)");
  std::vector<cplx> e0(dim), e1(dim);
  const double s0 = std::sqrt(std::max(w[0], 0.0));
  const double s1 = std::sqrt(std::max(w[1], 0.0));
  for (std::size_t a = 0; a < dim; ++a) {
    e0[a] = s0 * V(a, 0);
    e1[a] = s1 * V(a, 1);
  }
  const cplx b00 = theta.bilinear(e0, e0);
  const cplx b01 = theta.bilinear(e0, e1);
  const cplx b11 = theta.bilinear(e1, e1);
  if (w[1] <= 1e-13 * std::max(w[0], 1e-300))
    return detail::checked_roots(std::abs(b00), std::abs(b00));

  const double pi = std::numbers::pi;
  const detail::TwoTermObjective f2{b00, b01, b11};
  const int n2 = opt.two_term_points;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double lo_t = 0.0, lo_a = 0.0, hi_t = 0.0, hi_a = 0.0;
  for (int i = 0; i < n2; ++i) {
    const double theta_i = (pi / 2) * i / (n2 - 1);
    for (int j = 0; j < n2; ++j) {
      const double alpha_j = 2 * pi * j / n2;
      const double v = f2(theta_i, alpha_j);
      if (v < lo) lo = v, lo_t = theta_i, lo_a = alpha_j;
      if (v > hi) hi = v, hi_t = theta_i, hi_a = alpha_j;
    }
  }
  auto refine2 = [&](double& best, double t, double a, bool minimize) {
    double wt = (pi / 2) / (n2 - 1), wa = 2 * pi / n2;
    for (int iter = 0; iter < opt.refine_iters; ++iter) {
      double bt = t, ba = a;
      for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j) {
          const double tt = t + wt * i / 4.0, aa = a + wa * j / 4.0;
          const double v = f2(tt, aa);
          if (minimize ? v < best : v > best) best = v, bt = tt, ba = aa;
        }
      t = bt, a = ba;
      wt *= 0.5, wa *= 0.5;
    }
  };
  refine2(lo, lo_t, lo_a, true);
  refine2(hi, hi_t, hi_a, false);

  const detail::ThreeTermObjective f3{b00, b01, b11};
  const int n3 = opt.three_term_points;
  double lo3 = std::numeric_limits<double>::infinity(), hi3 = -lo3;
  double lp[4] = {0, 0, 0, 0}, hp[4] = {0, 0, 0, 0};
  for (int i1 = 0; i1 < n3; ++i1) {
    const double t1 = (pi / 2) * i1 / (n3 - 1);
    for (int j1 = 0; j1 < n3; ++j1) {
      const double a1 = 2 * pi * j1 / n3;
      for (int i2 = 0; i2 < n3; ++i2) {
        const double t2 = (pi / 2) * i2 / (n3 - 1);
        for (int j2 = 0; j2 < n3; ++j2) {
          const double a2 = 2 * pi * j2 / n3;
          const double v = f3(t1, a1, t2, a2);
          if (v < lo3) lo3 = v, lp[0] = t1, lp[1] = a1, lp[2] = t2, lp[3] = a2;
          if (v > hi3) hi3 = v, hp[0] = t1, hp[1] = a1, hp[2] = t2, hp[3] = a2;
        }
      }
    }
  }
  auto refine3 = [&](double& best, double p[4], bool minimize) {
    double win[4] = {(pi / 2) / (n3 - 1), 2 * pi / n3, (pi / 2) / (n3 - 1), 2 * pi / n3};
    for (int iter = 0; iter < opt.refine_iters; ++iter) {
      for (int axis = 0; axis < 4; ++axis) {
        double bq = p[axis];
        for (int i = -4; i <= 4; ++i) {
          const double q = p[axis] + win[axis] * i / 4.0;
          double args[4] = {p[0], p[1], p[2], p[3]};
          args[axis] = q;
          const double v = f3(args[0], args[1], args[2], args[3]);
          if (minimize ? v < best : v > best) best = v, bq = q;
        }
        p[axis] = bq;
      }
      for (double& ww : win) ww *= 0.5;
    }
  };
  refine3(lo3, lp, true);
  refine3(hi3, hp, false);

  return detail::checked_roots(std::min(lo, lo3), std::max(hi, hi3));
}

}  // namespace tangles
