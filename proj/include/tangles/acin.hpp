#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "tangles/constraints.hpp"
#include "tangles/measures.hpp"

namespace tangles {

// Five-real-coefficient canonical form of a three-party pure state:
// l0|000> + l1 e^{i omega}|100> + l2|101> + l3|110> + l4|111>.
struct AcinForm {
  std::array<double, 5> lambdas{};
  double omega = 0.0;
};

struct AcinDecomposition {
  AcinForm form;
  Matrix ua = Matrix(2, 2);  // local unitaries carrying the input state onto the form
  Matrix ub = Matrix(2, 2);
  Matrix uc = Matrix(2, 2);
  double residual = 0.0;  // max-abs mismatch between the rotated state and the form
};

inline Ket realize_acin(const AcinForm& f) {
  for (double l : f.lambdas)
    if (!std::isfinite(l) || l < -1e-12)
      throw std::invalid_argument("acin form: coefficients must be nonnegative");
  std::vector<cplx> v(8, cplx(0.0));
  v[0] = std::max(f.lambdas[0], 0.0);
  v[4] = std::max(f.lambdas[1], 0.0) * std::polar(1.0, f.omega);
  v[5] = std::max(f.lambdas[2], 0.0);
  v[6] = std::max(f.lambdas[3], 0.0);
  v[7] = std::max(f.lambdas[4], 0.0);
  return make_ket(3, v);
}

inline TangleTuple tangles_from_acin(const AcinForm& f) {
  const auto& l = f.lambdas;
  TangleTuple out;
  out.x = 2.0 * std::abs(cplx(l[2] * l[3]) - std::polar(l[1] * l[4], f.omega));
  out.y = 2.0 * l[0] * l[2];
  out.z = 2.0 * l[0] * l[3];
  out.t = 2.0 * l[0] * l[4];
  return out;
}

namespace detail {

inline void scale_row(Matrix& m, std::size_t row, cplx factor) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) *= factor;
}

struct AcinCandidate {
  AcinForm form;
  Matrix ua = Matrix(2, 2);
  Matrix ub = Matrix(2, 2);
  Matrix uc = Matrix(2, 2);
};

}  // namespace detail

// Rotate a three-party pure state onto its five-coefficient form. The
// first-party rotation is a root of the quadratic det(u0 T0 + u1 T1) = 0 in
// the slice determinants; the remaining unitaries diagonalize the top slice
// and gauge away all but one phase.
inline AcinDecomposition acin_normal_form(const Ket& psi) {
  if (psi.n != 3) throw std::domain_error("acin_normal_form: expects 3 parties");
  Matrix t0(2, 2), t1(2, 2);
  t0(0, 0) = psi.amps[0];
  t0(0, 1) = psi.amps[1];
  t0(1, 0) = psi.amps[2];
  t0(1, 1) = psi.amps[3];
  t1(0, 0) = psi.amps[4];
  t1(0, 1) = psi.amps[5];
  t1(1, 0) = psi.amps[6];
  t1(1, 1) = psi.amps[7];
  const cplx d0 = det2(t0);
  const cplx d1 = det2(t1);
  const cplx m = det2(t0 + t1) - d0 - d1;
  std::vector<std::pair<cplx, cplx>> cands;
  if (std::abs(d1) > 1e-14) {
    const cplx disc = std::sqrt(m * m - 4.0 * d0 * d1);
    cands.emplace_back(1.0, (-m + disc) / (2.0 * d1));
    cands.emplace_back(1.0, (-m - disc) / (2.0 * d1));
  } else if (std::abs(m) > 1e-14) {
    cands.emplace_back(1.0, -d0 / m);
    cands.emplace_back(0.0, 1.0);  // root at infinity
  } else if (std::abs(d0) < 1e-14) {
    cands.emplace_back(1.0, 0.0);
  } else {
    cands.emplace_back(0.0, 1.0);
  }

  std::vector<detail::AcinCandidate> results;
  for (const auto& [a, b] : cands) {
    const double nn = std::sqrt(std::norm(a) + std::norm(b));
    const cplx u0 = a / nn, u1 = b / nn;
    detail::AcinCandidate cand;
    cand.ua(0, 0) = u0;
    cand.ua(0, 1) = u1;
    cand.ua(1, 0) = -std::conj(u1);
    cand.ua(1, 1) = std::conj(u0);
    const Matrix t0p = t0 * u0 + t1 * u1;
    const Matrix t1p = t0 * (-std::conj(u1)) + t1 * std::conj(u0);
    if (t0p.frobenius_norm() < 1e-12) {
      // First slice vanished: the state factors across the first party.
      const Svd2 svd = svd2x2(t1p);
      cand.ub = svd.U.adjoint();
      cand.uc = svd.V.transpose();
      cand.form.lambdas = {0.0, svd.s0, 0.0, 0.0, svd.s1};
      cand.form.omega = 0.0;
      results.push_back(std::move(cand));
      continue;
    }
    const Svd2 svd = svd2x2(t0p);
    Matrix ub = svd.U.adjoint();
    Matrix uc = svd.V.transpose();
    const Matrix t1c = ub * t1p * uc.transpose();
    const double lam0 = svd.s0;
    const cplx m11 = t1c(0, 0), m12 = t1c(0, 1), m21 = t1c(1, 0), m22 = t1c(1, 1);
    const double a_ = std::arg(m12), b_ = std::arg(m21), c_ = std::arg(m22);
    double delta = 0.0, beta = 0.0, gamma = 0.0;
    if (std::abs(m22) > 1e-12 && std::abs(m12) > 1e-12 && std::abs(m21) > 1e-12) {
      gamma = b_ - c_;
      delta = -a_ - gamma;
      beta = -b_ - delta;
    } else if (std::abs(m12) > 1e-12 && std::abs(m21) > 1e-12) {
      delta = std::abs(m11) > 1e-12 ? -std::arg(m11) : 0.0;
      gamma = -a_ - delta;
      beta = -b_ - delta;
    } else {
      // zero whatever phases are constrained
      delta = std::abs(m11) > 1e-12 ? -std::arg(m11) : 0.0;
      gamma = std::abs(m12) > 1e-12 ? -a_ - delta : 0.0;
      beta = std::abs(m21) > 1e-12 ? -b_ - delta : 0.0;
      if (std::abs(m22) > 1e-12) {
        if (std::abs(m12) > 1e-12 && std::abs(m21) <= 1e-12)
          beta = -c_ - delta - gamma;
        else if (std::abs(m21) > 1e-12 && std::abs(m12) <= 1e-12)
          gamma = -c_ - delta - beta;
        else if (std::abs(m12) <= 1e-12 && std::abs(m21) <= 1e-12)
          gamma = -c_ - delta;
      }
    }
    cand.ub = ub;
    cand.uc = uc;
    detail::scale_row(cand.ua, 1, std::polar(1.0, delta));
    detail::scale_row(cand.ub, 1, std::polar(1.0, beta));
    detail::scale_row(cand.uc, 1, std::polar(1.0, gamma));
    const cplx l1c = m11 * std::polar(1.0, delta);
    cand.form.lambdas = {lam0, std::abs(l1c), std::abs(m12), std::abs(m21), std::abs(m22)};
    double omega = std::abs(l1c) > 1e-12 ? std::arg(l1c) : 0.0;
    if (omega < 0.0) omega += 2.0 * std::numbers::pi;
    if (cand.form.lambdas[1] < 1e-12 || cand.form.lambdas[4] < 1e-12) omega = 0.0;
    cand.form.omega = omega;
    results.push_back(std::move(cand));
  }

  const auto best = std::max_element(results.begin(), results.end(),
                                     [](const detail::AcinCandidate& p, const detail::AcinCandidate& q) {
                                       return p.form.lambdas[0] < q.form.lambdas[0];
                                     });
  AcinDecomposition out;
  out.form = best->form;
  out.ua = best->ua;
  out.ub = best->ub;
  out.uc = best->uc;
  std::vector<LocalOperator> rot(3);
  for (int p = 0; p < 3; ++p) {
    const Matrix& u = p == 0 ? out.ua : (p == 1 ? out.ub : out.uc);
    rot[p].party = p;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) rot[p].m[i][j] = u(i, j);
  }
  const Ket rotated = apply_local(rot, psi).first;
  const Ket wanted = realize_acin(out.form);
  double resid = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    resid = std::max(resid, std::abs(rotated.amps[i] - wanted.amps[i]));
  out.residual = resid;
  if (resid >= 1e-9)
    throw std::runtime_error("acin_normal_form: rotated state misses the form (residual " +
                             std::to_string(resid) + ")");
  return out;
}

// Certificates that the achievability form behaves as claimed along the
// canonical-form chart: fixed curvature in x, a perfect-square value on both
// phase branches, and phase-endpoint minimality.
struct CertificateReport {
  double second_difference = 0.0;   // finite difference of the form in x
  double expected_curvature = 0.0;  // -2 (t^2 + y^2 + z^2)
  double lhs_omega0 = 0.0;
  double square_omega0 = 0.0;
  double lhs_omegapi = 0.0;
  double square_omegapi = 0.0;
  bool flipped_branch_stronger = true;
  double sweep_min = 0.0;   // min of the form over an 8-point phase sweep
  double branch_min = 0.0;  // min over the two endpoint branches
};

inline CertificateReport necessity_certificates(const AcinForm& f, double h = 0.1) {
  double norm2 = 0.0;
  for (double l : f.lambdas) {
    if (!std::isfinite(l) || l < -1e-12)
      throw std::invalid_argument("acin form: coefficients must be nonnegative");
    norm2 += l * l;
  }
  if (std::abs(norm2 - 1.0) > 1e-9)
    throw std::invalid_argument("necessity_certificates: form must be normalized");
  const auto& l = f.lambdas;
  CertificateReport rep;

  const TangleTuple tt = tangles_from_acin(f);
  const double at = achievability_lhs(tt.x, tt.y, tt.z, tt.t);
  const double ap = achievability_lhs(tt.x + h, tt.y, tt.z, tt.t);
  const double am = achievability_lhs(tt.x - h, tt.y, tt.z, tt.t);
  rep.second_difference = (ap - 2.0 * at + am) / (h * h);
  rep.expected_curvature = -2.0 * (tt.t * tt.t + tt.y * tt.y + tt.z * tt.z);

  const double y = 2.0 * l[0] * l[2];
  const double z = 2.0 * l[0] * l[3];
  const double t = 2.0 * l[0] * l[4];
  auto branch = [&](double sgn) {
    const double x_signed = 2.0 * (l[2] * l[3] + sgn * l[1] * l[4]);
    const double lhs = achievability_lhs(x_signed, y, z, t);
    const double core =
        sgn * 2.0 * l[1] * l[2] * l[3] + l[4] * (1.0 - 2.0 * (l[2] * l[2] + l[3] * l[3] + l[4] * l[4]));
    const double root = 2.0 * l[0] * core;
    return std::make_pair(lhs, root * root);
  };
  std::tie(rep.lhs_omega0, rep.square_omega0) = branch(-1.0);
  std::tie(rep.lhs_omegapi, rep.square_omegapi) = branch(+1.0);

  // When the signed pair coherence is negative, the physical (absolute)
  // tangle can only increase the form's value.
  const double x0_signed = 2.0 * (l[2] * l[3] - l[1] * l[4]);
  const double abs_branch = achievability_lhs(std::abs(x0_signed), y, z, t);
  rep.flipped_branch_stronger = abs_branch >= rep.lhs_omega0 - 1e-12;

  double sweep = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 8; ++k) {
    AcinForm g = f;
    g.omega = 2.0 * std::numbers::pi * k / 8.0;
    const TangleTuple gt = tangles_from_acin(g);
    sweep = std::min(sweep, achievability_lhs(gt.x, gt.y, gt.z, gt.t));
  }
  rep.sweep_min = sweep;
  AcinForm e0 = f, epi = f;
  e0.omega = 0.0;
  epi.omega = std::numbers::pi;
  const TangleTuple t0t = tangles_from_acin(e0);
  const TangleTuple tpt = tangles_from_acin(epi);
  rep.branch_min = std::min(achievability_lhs(t0t.x, t0t.y, t0t.z, t0t.t),
                            achievability_lhs(tpt.x, tpt.y, tpt.z, tpt.t));
  return rep;
}

}  // namespace tangles
