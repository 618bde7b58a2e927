#include <cmath>
#include <cstdint>

#include <gtest/gtest.h>

#include "tangles/haar.hpp"

namespace {

TEST(RandomStream, DeterministicAndStreamSeparated) {
  tangles::RandomStream a(42, 7);
  tangles::RandomStream b(42, 7);
  tangles::RandomStream c(42, 8);
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t va = a.next_bits();
    EXPECT_EQ(va, b.next_bits());
    if (va != c.next_bits()) any_diff = true;
  }
  EXPECT_TRUE(any_diff);
}

TEST(RandomStream, UniformStaysInOpenInterval) {
  tangles::RandomStream rng(1, 0);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.u01();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_GT(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_LT(lo, 1e-3);
  EXPECT_GT(hi, 1.0 - 1e-3);
}

TEST(RandomStream, GaussianMoments) {
  tangles::RandomStream rng(2, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.gaussian();
    sum += g;
    sum2 += g * g;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum2 / n, 1.0, 0.02);
}

TEST(Haar, KetsAreNormalizedAndReproducible) {
  const tangles::Ket a = tangles::haar_random_ket(3, 7, 5);
  const tangles::Ket b = tangles::haar_random_ket(3, 7, 5);
  ASSERT_EQ(a.amps.size(), 8u);
  EXPECT_NEAR(tangles::norm2(a), 1.0, 1e-12);
  for (std::size_t i = 0; i < a.amps.size(); ++i) EXPECT_EQ(a.amps[i], b.amps[i]);
}

TEST(Haar, FirstAmplitudeMomentMatchesUniformMeasure) {
  // |amp_0|^2 of a Haar ket on 8 dimensions is Beta(1,7): mean 1/8, variance
  // 7/576. The seed is fixed, so a 4 sigma band is a deterministic check.
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const tangles::Ket psi = tangles::haar_random_ket(3, 20240801, i);
    sum += std::norm(psi.amps[0]);
  }
  const double mean = sum / n;
  const double sigma = std::sqrt(7.0 / 576.0 / n);
  EXPECT_NEAR(mean, 0.125, 4.0 * sigma);
}

}  // namespace
