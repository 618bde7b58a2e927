#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "tangles/haar.hpp"
#include "tangles/measures.hpp"

namespace {

using tangles::cplx;
using tangles::Ket;
using tangles::Matrix;
using tangles::Parity;

const double kRoot2 = std::sqrt(2.0);

Ket w_state() {
  std::vector<cplx> amps(8, 0.0);
  amps[1] = amps[2] = amps[4] = 1.0 / std::sqrt(3.0);
  return tangles::make_ket(3, amps);
}

TEST(Measures, ThreeTangleRoutesAgree) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    const Ket psi = tangles::haar_random_ket(3, 11, i);
    const double literal = tangles::three_tangle(psi);
    const double via_hdet = 2.0 * std::sqrt(std::abs(tangles::hyperdeterminant(psi)));
    const double via_theta = tangles::k_tangle_pure(psi);
    EXPECT_NEAR(literal, via_hdet, 1e-10);
    EXPECT_NEAR(literal, via_theta, 1e-10);
  }
}

TEST(Measures, GhzOracles) {
  const Ket g = tangles::ghz_ket(3, 1.0 / kRoot2, 1.0 / kRoot2);
  const tangles::TangleTuple tt = tangles::tangle_tuple(g);
  EXPECT_NEAR(tt.x, 0.0, 1e-12);
  EXPECT_NEAR(tt.y, 0.0, 1e-12);
  EXPECT_NEAR(tt.z, 0.0, 1e-12);
  EXPECT_NEAR(tt.t, 1.0, 1e-12);
  for (int p = 0; p < 3; ++p) EXPECT_NEAR(tangles::one_tangle(g, p), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(tangles::hyperdeterminant(g)), 0.25, 1e-14);
}

TEST(Measures, WOracles) {
  const Ket w = w_state();
  const tangles::TangleTuple tt = tangles::tangle_tuple(w);
  EXPECT_NEAR(tt.x, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(tt.y, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(tt.z, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(tt.t, 0.0, 1e-10);
  for (int p = 0; p < 3; ++p)
    EXPECT_NEAR(tangles::one_tangle(w, p), 2.0 * kRoot2 / 3.0, 1e-12);
  EXPECT_NEAR(std::abs(tangles::hyperdeterminant(w)), 0.0, 1e-15);
  for (const std::vector<int>& pair : {std::vector<int>{0, 1}, {0, 2}, {1, 2}}) {
    const tangles::DensityMatrix d = tangles::partial_trace(w, pair);
    EXPECT_NEAR(tangles::two_tangle(d), 2.0 / 3.0, 1e-10);
    EXPECT_NEAR(tangles::two_tangle_assistance(d), 2.0 / 3.0, 1e-10);
  }
}

TEST(Measures, TwoPeakStateTangle) {
  const Ket g = tangles::ghz_ket(3, 1.0 / std::sqrt(5.0), 2.0 / std::sqrt(5.0));
  EXPECT_NEAR(tangles::three_tangle(g), 0.8, 1e-12);
  const tangles::TangleTuple tt = tangles::tangle_tuple(g);
  EXPECT_NEAR(tt.x, 0.0, 1e-12);
  EXPECT_NEAR(tt.t, 0.8, 1e-12);
  EXPECT_NEAR(tangles::one_tangle(g, 0), 0.8, 1e-12);
}

TEST(Measures, TwoTanglePure) {
  const Ket bell = tangles::ghz_ket(2, 1.0 / kRoot2, 1.0 / kRoot2);
  EXPECT_NEAR(tangles::two_tangle(bell), 1.0, 1e-13);
  std::vector<cplx> prod(4, 0.0);
  prod[0] = 1.0;
  EXPECT_NEAR(tangles::two_tangle(tangles::make_ket(2, prod)), 0.0, 1e-15);
  const Ket skew = tangles::ghz_ket(2, 1.0 / std::sqrt(5.0), 2.0 / std::sqrt(5.0));
  EXPECT_NEAR(tangles::two_tangle(skew), 0.8, 1e-13);
  EXPECT_THROW(tangles::two_tangle(tangles::ghz_ket(3, 1.0, 0.0)), std::domain_error);
}

TEST(Measures, GhzPairMarginals) {
  const Ket g = tangles::ghz_ket(3, 1.0 / kRoot2, 1.0 / kRoot2);
  const tangles::DensityMatrix d = tangles::partial_trace(g, {0, 1});
  EXPECT_NEAR(tangles::two_tangle(d), 0.0, 1e-12);
  EXPECT_NEAR(tangles::two_tangle_assistance(d), 1.0, 1e-12);

  // spectrum of rho * (theta rho^* theta) for the corner mixture
  const tangles::EpsilonOperator& theta = tangles::build_theta(2, Parity::even);
  const Matrix tm = theta.as_matrix();
  const Matrix tilde = tm * d.rho.conjugate() * tm;
  const std::vector<double> w = tangles::hermitian_eigenvalues(d.rho * tilde);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_NEAR(w[0], 0.25, 1e-12);
  EXPECT_NEAR(w[1], 0.25, 1e-12);
  EXPECT_NEAR(w[2], 0.0, 1e-12);
  EXPECT_NEAR(w[3], 0.0, 1e-12);
}

TEST(Measures, AssistanceNeedsLowRank) {
  const Ket psi = tangles::haar_random_ket(4, 17, 3);
  const tangles::DensityMatrix d = tangles::partial_trace(psi, {0, 1});
  EXPECT_THROW(tangles::two_tangle_assistance(d), std::domain_error);
}

TEST(Measures, FastPathMatchesSpectralRoute) {
  const tangles::EpsilonOperator& theta = tangles::build_theta(2, Parity::even);
  for (std::uint64_t i = 0; i < 25; ++i) {
    const Ket psi = tangles::haar_random_ket(3, 13, i);
    const tangles::DensityMatrix d = tangles::partial_trace(psi, {0, 1});
    const tangles::RootPair slow = tangles::wootters_roots(d.rho, theta);
    const tangles::RootPair fast = tangles::rank2_fast_roots(d.rho, theta);
    EXPECT_NEAR(slow.convex, fast.convex, 1e-10);
    EXPECT_NEAR(slow.concave, fast.concave, 1e-10);
    // the roots square-sum to Tr(rho rho~), a third independent route
    const std::vector<double> s = tangles::wootters_svals(d.rho, theta);
    const tangles::Matrix th = theta.as_matrix();
    const tangles::Matrix R = d.rho * (th * d.rho.conjugate() * th);
    double sq = 0.0;
    for (double v : s) sq += v * v;
    EXPECT_NEAR(sq, R.trace().real(), 1e-9);
  }
}

TEST(Measures, KTanglePureAcrossOrders) {
  for (int k = 2; k <= 6; ++k) {
    const Ket g = tangles::ghz_ket(k, 1.0 / kRoot2, 1.0 / kRoot2);
    EXPECT_NEAR(tangles::k_tangle_pure(g), 1.0, 1e-12) << k;
    std::vector<cplx> prod(std::size_t{1} << k, 0.0);
    prod[0] = 1.0;
    EXPECT_NEAR(tangles::k_tangle_pure(tangles::make_ket(k, prod)), 0.0, 1e-15) << k;
  }
  EXPECT_THROW(tangles::k_tangle_pure(tangles::ghz_ket(1, 1.0, 0.0)), std::domain_error);
}

TEST(Measures, CornerBlockResiduals) {
  Matrix block(2, 2);
  block(0, 0) = 0.7;
  block(0, 1) = 0.2;
  block(1, 0) = 0.2;
  block(1, 1) = 0.3;
  const tangles::RootPair direct = tangles::residual_tangle_ghz_block(block);
  EXPECT_NEAR(direct.convex, 0.4, 1e-15);
  EXPECT_NEAR(direct.concave, 2.0 * std::sqrt(0.21), 1e-15);

  tangles::DensityMatrix d;
  d.parties = {0, 1, 2, 3};
  d.rho = Matrix(16, 16);
  d.rho(0, 0) = 0.7;
  d.rho(0, 15) = 0.2;
  d.rho(15, 0) = 0.2;
  d.rho(15, 15) = 0.3;
  const tangles::RootPair via_density = tangles::residual_tangle_ghz_block(d);
  EXPECT_NEAR(via_density.convex, 0.4, 1e-15);
  EXPECT_NEAR(via_density.concave, 2.0 * std::sqrt(0.21), 1e-15);
  EXPECT_NEAR(tangles::k_tangle_mixed(d), 0.4, 1e-10);

  d.rho(1, 1) = 0.1;  // off-corner support
  EXPECT_THROW(tangles::residual_tangle_ghz_block(d), std::domain_error);
}

TEST(Measures, ChainStepOracle) {
  const Ket g = tangles::ghz_ket(3, 1.0 / kRoot2, 1.0 / kRoot2);
  const tangles::ChainStep step = tangles::pure_k_to_km1(g, 0);
  EXPECT_NEAR(step.k_tangle, 1.0, 1e-12);
  EXPECT_NEAR(step.roots.convex, 0.0, 1e-12);
  EXPECT_NEAR(step.roots.concave, 1.0, 1e-12);
  EXPECT_NEAR(step.defect, 0.0, 1e-12);
  EXPECT_THROW(tangles::pure_k_to_km1(tangles::ghz_ket(4, 1.0, 0.0), 0), std::domain_error);
}

TEST(Measures, RootsFromSvalsClampsConvexPart) {
  const tangles::RootPair a = tangles::detail::roots_from_svals({0.9, 0.2, 0.2, 0.2});
  EXPECT_NEAR(a.convex, 0.3, 1e-15);
  EXPECT_NEAR(a.concave, 1.1, 1e-15);
  const tangles::RootPair b = tangles::detail::roots_from_svals({0.5, 0.5, 0.1});
  EXPECT_NEAR(b.convex, 0.0, 1e-15);
  EXPECT_NEAR(b.concave, 1.0, 1e-15);
}

}  // namespace
