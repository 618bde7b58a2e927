#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "tangles/measures.hpp"

namespace tangles {

// Invertible 2x2 operator attached to one party of a corner-supported state.
using LocalFactor = Matrix;

// Canonical coordinates of a state (tensor of LocalFactors) |0..0> + |1..1>:
// r >= 1 measures the column-norm imbalance, phis[p] in [0, pi/2] the angle
// between the columns of factor p, kappa in [-1, 1] the accumulated phase.
struct GhzClassParams {
  int n = 0;
  double r = 1.0;
  std::vector<double> phis;
  double kappa = -1.0;
};

namespace detail {

inline void check_factor(const Matrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw std::invalid_argument("local factor must be 2x2");
}

inline Matrix invert_factor(const Matrix& m) {
  check_factor(m);
  const cplx det = det2(m);
  if (std::abs(det) <= 1e-12) throw std::domain_error("local factor is singular");
  Matrix inv(2, 2);
  inv(0, 0) = m(1, 1) / det;
  inv(0, 1) = -m(0, 1) / det;
  inv(1, 0) = -m(1, 0) / det;
  inv(1, 1) = m(0, 0) / det;
  return inv;
}

}  // namespace detail

inline void check_ghz_params(const GhzClassParams& p) {
  if (p.n < 2 || p.n > kMaxParties) throw std::invalid_argument("params: party count outside [2,12]");
  if (static_cast<int>(p.phis.size()) != p.n)
    throw std::invalid_argument("params: angle count must equal party count");
  if (!std::isfinite(p.r) || !std::isfinite(p.kappa)) throw std::invalid_argument("params: non-finite value");
  if (p.r < 1.0 - 1e-12) throw std::domain_error("params: r must be >= 1");
  if (std::abs(p.kappa) > 1.0 + 1e-12) throw std::domain_error("params: kappa outside [-1,1]");
  for (double phi : p.phis) {
    if (!std::isfinite(phi)) throw std::invalid_argument("params: non-finite angle");
    if (phi < -1e-12 || phi > std::numbers::pi / 2 + 1e-12)
      throw std::domain_error("params: angle outside [0, pi/2]");
  }
}

inline double ghz_denominator(const GhzClassParams& p) {
  double prod_cos = 1.0;
  for (double phi : p.phis) prod_cos *= std::cos(phi);
  const double denom = p.r + p.kappa * prod_cos;
  if (denom <= 1e-15) throw std::domain_error("params: degenerate normalization");
  return denom;
}

// Canonical coordinates of the state (tensor of ops) applied to |0..0>+|1..1>.
// Each op contributes only through its column Gram data, so the coordinates
// are invariant under rescaling any single factor.
inline GhzClassParams canonical_params(const std::vector<LocalFactor>& ops) {
  const int n = static_cast<int>(ops.size());
  if (n < 2 || n > kMaxParties) throw std::invalid_argument("canonical_params: party count outside [2,12]");
  GhzClassParams out;
  out.n = n;
  out.phis.resize(n);
  double log_pu = 0.0;
  double phase_sum = 0.0;
  bool phase_defined = true;
  for (int p = 0; p < n; ++p) {
    const Matrix& m = ops[p];
    detail::check_factor(m);
    const double u = std::sqrt(std::norm(m(0, 0)) + std::norm(m(1, 0)));
    const double v = std::sqrt(std::norm(m(0, 1)) + std::norm(m(1, 1)));
    const cplx ip = std::conj(m(0, 0)) * m(0, 1) + std::conj(m(1, 0)) * m(1, 1);
    const double adet = std::abs(det2(m));
    if (adet <= 1e-12) throw std::domain_error("canonical_params: singular factor leaves the class");
    const double c = std::abs(ip) / (u * v);
    const double s = adet / (u * v);
    out.phis[p] = std::atan2(s, c);
    log_pu += std::log(u / v);
    if (c < 1e-12)
      phase_defined = false;
    else
      phase_sum += std::arg(ip);
  }
  const double pu = std::exp(log_pu);
  out.r = 0.5 * (pu + 1.0 / pu);
  out.kappa = phase_defined ? std::cos(phase_sum) : -1.0;
  return out;
}

// tau of the subset named by mask (bit p = party p), |subset| >= 2:
// product of sines inside, cosines outside, over the normalization.
inline double tangles_closed_form(const GhzClassParams& p, unsigned mask) {
  check_ghz_params(p);
  if (mask >= (1u << p.n)) throw std::invalid_argument("subset mask out of range");
  if (std::popcount(mask) < 2) throw std::domain_error("subset tangle needs at least 2 parties");
  const double denom = ghz_denominator(p);
  double num = 1.0;
  for (int q = 0; q < p.n; ++q)
    num *= (mask >> q) & 1u ? std::sin(p.phis[q]) : std::cos(p.phis[q]);
  return num / denom;
}

inline double one_tangle_closed_form(const GhzClassParams& p, int party) {
  check_ghz_params(p);
  if (party < 0 || party >= p.n) throw std::invalid_argument("party out of range");
  const double denom = ghz_denominator(p);
  double prod_c2 = 1.0;
  for (int q = 0; q < p.n; ++q)
    if (q != party) prod_c2 *= std::cos(p.phis[q]) * std::cos(p.phis[q]);
  return std::sin(p.phis[party]) * std::sqrt(std::max(1.0 - prod_c2, 0.0)) / denom;
}

inline TangleTuple tuple_closed_form(const GhzClassParams& p) {
  if (p.n != 3) throw std::domain_error("tuple_closed_form: expects 3 parties");
  TangleTuple out;
  out.x = tangles_closed_form(p, 0b110);
  out.y = tangles_closed_form(p, 0b101);
  out.z = tangles_closed_form(p, 0b011);
  out.t = tangles_closed_form(p, 0b111);
  return out;
}

// One representative factor list realizing the coordinates: all imbalance and
// phase are pushed into party 0, parties >= 1 get the real triangular form.
inline std::vector<LocalFactor> reconstruct_ops(const GhzClassParams& p) {
  check_ghz_params(p);
  const double ratio = p.r + std::sqrt(std::max(p.r * p.r - 1.0, 0.0));
  const double kappa = std::clamp(p.kappa, -1.0, 1.0);
  const cplx phase(kappa, std::sqrt(std::max(1.0 - kappa * kappa, 0.0)));
  std::vector<LocalFactor> ops;
  ops.reserve(p.n);
  const double root = std::sqrt(ratio);
  Matrix m0(2, 2);
  m0(0, 0) = root;
  m0(0, 1) = std::cos(p.phis[0]) / root * phase;
  m0(1, 1) = std::sin(p.phis[0]) / root * phase;
  ops.push_back(m0);
  for (int q = 1; q < p.n; ++q) {
    Matrix m(2, 2);
    m(0, 0) = 1.0;
    m(0, 1) = std::cos(p.phis[q]);
    m(1, 1) = std::sin(p.phis[q]);
    ops.push_back(m);
  }
  return ops;
}

inline Ket apply_factors(const std::vector<LocalFactor>& ops, const Ket& psi) {
  if (static_cast<int>(ops.size()) != psi.n)
    throw std::invalid_argument("apply_factors: need one factor per party");
  std::vector<LocalOperator> local(ops.size());
  for (std::size_t p = 0; p < ops.size(); ++p) {
    detail::check_factor(ops[p]);
    local[p].party = static_cast<int>(p);
    local[p].m[0][0] = ops[p](0, 0);
    local[p].m[0][1] = ops[p](0, 1);
    local[p].m[1][0] = ops[p](1, 0);
    local[p].m[1][1] = ops[p](1, 1);
  }
  return apply_local(local, psi).first;
}

inline Ket reconstruct_ket(const GhzClassParams& p) {
  const double inv_root2 = 1.0 / std::sqrt(2.0);
  return normalized(apply_factors(reconstruct_ops(p), ghz_ket(p.n, inv_root2, inv_root2)));
}

struct InversionReport {
  bool feasible = false;
  double r = 0.0;  // compatibility value; >= 1 (within 1e-9) iff realizable
  std::optional<GhzClassParams> params;
};

// Recover three-party coordinates from a tangle tuple on the kappa = -1
// branch. Each pair tangle fixes one cosine; r then measures whether the
// tuple sits inside the class.
inline InversionReport invert_tangles(const TangleTuple& tt) {
  for (double v : {tt.x, tt.y, tt.z, tt.t})
    if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-9)
      throw std::invalid_argument("invert_tangles: tangles must lie in [0,1]");
  if (tt.t <= 1e-9)
    throw std::domain_error("invert_tangles: degenerate branch, needs a tripartite component");
  const double t2 = tt.t * tt.t;
  const double hx = std::sqrt(t2 + tt.x * tt.x);
  const double hy = std::sqrt(t2 + tt.y * tt.y);
  const double hz = std::sqrt(t2 + tt.z * tt.z);
  InversionReport out;
  out.r = (t2 + tt.x * tt.y * tt.z) / (hx * hy * hz);
  out.feasible = out.r >= 1.0 - 1e-9;
  if (out.feasible) {
    GhzClassParams p;
    p.n = 3;
    p.r = std::max(out.r, 1.0);
    p.phis = {std::atan2(tt.t, tt.x), std::atan2(tt.t, tt.y), std::atan2(tt.t, tt.z)};
    p.kappa = -1.0;
    out.params = std::move(p);
  }
  return out;
}

// Value of the achievability form on this state's tangle tuple, evaluated
// through the coordinates alone. Reduces to sin^2-product * (r^2 - 1) / D^4
// on the kappa = -1 branch.
inline double ghz_achievability_identity(const GhzClassParams& p) {
  if (p.n != 3) throw std::domain_error("ghz_achievability_identity: expects 3 parties");
  check_ghz_params(p);
  const double denom = ghz_denominator(p);
  double prod_s2 = 1.0, prod_c = 1.0;
  for (double phi : p.phis) {
    prod_s2 *= std::sin(phi) * std::sin(phi);
    prod_c *= std::cos(phi);
  }
  const double shifted = denom + prod_c;
  return prod_s2 * (shifted * shifted - 1.0) / (denom * denom * denom * denom);
}

// |tau_party^2 - sum of tau_subset^2 over subsets containing the party|.
inline double strong_monogamy_residual(const GhzClassParams& p, int party) {
  check_ghz_params(p);
  if (p.n > kMaxThetaParties) throw std::domain_error("strong_monogamy_residual: party count above 6");
  if (party < 0 || party >= p.n) throw std::invalid_argument("party out of range");
  const double tau_a = one_tangle_closed_form(p, party);
  double sum = 0.0;
  for (unsigned mask = 0; mask < (1u << p.n); ++mask) {
    if (!((mask >> party) & 1u) || std::popcount(mask) < 2) continue;
    const double tau = tangles_closed_form(p, mask);
    sum += tau * tau;
  }
  return std::abs(tau_a * tau_a - sum);
}

// Two-dimensional block left on the corner span after tracing out the listed
// factors, normalized to unit trace.
inline Matrix marginal_block(const std::vector<LocalFactor>& traced_ops) {
  if (traced_ops.empty()) throw std::invalid_argument("marginal_block: need at least one factor");
  double prod_u2 = 1.0, prod_v2 = 1.0;
  cplx prod_ip = 1.0;
  for (const Matrix& m : traced_ops) {
    detail::check_factor(m);
    prod_u2 *= std::norm(m(0, 0)) + std::norm(m(1, 0));
    prod_v2 *= std::norm(m(0, 1)) + std::norm(m(1, 1));
    prod_ip *= std::conj(m(0, 0)) * m(0, 1) + std::conj(m(1, 0)) * m(1, 1);
  }
  const double trace = prod_u2 + prod_v2;
  Matrix block(2, 2);
  block(0, 0) = prod_u2 / trace;
  block(0, 1) = std::conj(prod_ip) / trace;
  block(1, 0) = prod_ip / trace;
  block(1, 1) = prod_v2 / trace;
  return block;
}

// Subset tangle through the filtering route: undo the subset's factors on the
// reduced state, check it lands on the corner span, and scale the corner
// coherence back by the filter determinants and the success weight.
inline double filtered_subset_tangle(const std::vector<LocalFactor>& ops, const Ket& psi,
                                     unsigned mask) {
  if (static_cast<int>(ops.size()) != psi.n)
    throw std::invalid_argument("filtered_subset_tangle: need one factor per party");
  if (mask >= (1u << psi.n)) throw std::invalid_argument("subset mask out of range");
  if (std::popcount(mask) < 2) throw std::domain_error("subset tangle needs at least 2 parties");
  std::vector<int> keep;
  double prod_adet = 1.0;
  Matrix filter = Matrix::identity(1);
  for (int p = 0; p < psi.n; ++p) {
    if (!((mask >> p) & 1u)) continue;
    keep.push_back(p);
    prod_adet *= std::abs(det2(ops[p]));
    filter = kron(filter, detail::invert_factor(ops[p]));
  }
  const DensityMatrix reduced = partial_trace(psi, keep);
  const Matrix sigma = filter * reduced.rho * filter.adjoint();
  const double weight = sigma.trace().real();
  if (weight <= 1e-15) throw std::domain_error("filtered_subset_tangle: vanishing filter weight");
  const std::size_t dim = sigma.rows();
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) {
      const bool corner = (i == 0 || i == dim - 1) && (j == 0 || j == dim - 1);
      if (!corner && std::abs(sigma(i, j)) / weight >= 1e-9)
        throw std::domain_error("filtered_subset_tangle: filtered state leaves the corner block");
    }
  return prod_adet * 2.0 * std::abs(sigma(0, dim - 1));
}

}  // namespace tangles
