#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace tangles {

// Achievability form in the squared tripartite tangle T. Nonnegative exactly
// on tuples realizable within the corner-supported class; the T < 0 extension
// doubles as the assistance-side boundary.
inline double achievability_lhs_t2(double x, double y, double z, double T) {
  return T * (1.0 - x * x - y * y - z * z - T) -
         (x * x * y * y + x * x * z * z + y * y * z * z - 2.0 * x * y * z);
}

inline double achievability_lhs(double x, double y, double z, double t) {
  return achievability_lhs_t2(x, y, z, t * t);
}

// Same locus written as a difference of a quartic product and a completed
// square; identically 4 times the achievability form.
inline double completed_square_margin_t2(double x, double y, double z, double T) {
  const double quartic = (1.0 + x + y + z) * (1.0 + x - y - z) * (1.0 - x + y - z) *
                         (1.0 - x - y + z);
  const double square = 1.0 - 2.0 * T - x * x - y * y - z * z;
  return quartic - square * square;
}

inline double completed_square_margin(double x, double y, double z, double t) {
  return completed_square_margin_t2(x, y, z, t * t);
}

inline double steiner_radicand(double x, double y, double z) {
  return (1.0 - x - y + z) * (1.0 - x + y - z) * (1.0 + x - y - z) * (1.0 + x + y + z);
}

enum class RoofMode { convex, concave };

// Quartic bound on the squared pair tangles: convex roofs obey
// x^2+y^2+z^2 <= 1 + sqrt(rad), concave roofs x^2+y^2+z^2 >= 1 - sqrt(rad).
// A negative radicand means the point is outside the bound's domain; the
// -inf sentinel keeps min-aggregation honest.
inline double steiner_margin(double x, double y, double z, RoofMode mode) {
  const double rad = steiner_radicand(x, y, z);
  if (rad < -1e-12) return -std::numeric_limits<double>::infinity();
  const double root = std::sqrt(std::max(rad, 0.0));
  const double excess = 1.0 - x * x - y * y - z * z;
  return mode == RoofMode::convex ? root + excess : root - excess;
}

inline double assistance_boundary(double x, double y, double z, double t) {
  return achievability_lhs_t2(x, y, z, -t * t);
}

// Smaller marginal eigenvalue of the party whose two pair tangles and
// tripartite tangle are given.
inline double eigenvalue_from_tangles(double tau_ab, double tau_ac, double t) {
  const double rad = 1.0 - tau_ab * tau_ab - tau_ac * tau_ac - t * t;
  if (rad < -1e-9) throw std::domain_error("eigenvalue_from_tangles: tangles exceed the unit ball");
  return 0.5 * (1.0 - std::sqrt(std::max(rad, 0.0)));
}

namespace detail {
inline double linear_entropy(double l) { return 2.0 * l * (1.0 - l); }
}

// Pair tangles back from the three marginal eigenvalues and the tripartite
// tangle, in tuple order (B|C, A|C, A|B).
inline std::array<double, 3> tangles_from_eigenvalues(double a, double b, double c, double t) {
  const double la = detail::linear_entropy(a);
  const double lb = detail::linear_entropy(b);
  const double lc = detail::linear_entropy(c);
  const double half_t2 = 0.5 * t * t;
  const std::array<double, 3> rads = {lb + lc - la - half_t2, la + lc - lb - half_t2,
                                      la + lb - lc - half_t2};
  std::array<double, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (rads[i] < -1e-12)
      throw std::domain_error("tangles_from_eigenvalues: eigenvalues admit no real pair tangle");
    out[i] = std::sqrt(std::max(rads[i], 0.0));
  }
  return out;
}

struct TriangleMargins {
  std::array<double, 3> margins{};  // b+c-a, a+c-b, a+b-c
  double literal_product = 0.0;     // (a-b-c)(-a+b-c)(-a-b+c)
};

inline TriangleMargins marginal_triangle_margins(double a, double b, double c) {
  TriangleMargins out;
  out.margins = {b + c - a, a + c - b, a + b - c};
  out.literal_product = (a - b - c) * (-a + b - c) * (-a - b + c);
  return out;
}

// The two quartic factors whose product completes the squared achievability
// form on the eigenvalue chart.
inline std::pair<double, double> boundary_factors(double a, double b, double c, double t) {
  const double t4 = t * t * t * t;
  const double p1 =
      t4 + 16.0 * (1.0 + a - b - c) * (1.0 - a + b - c) * (1.0 - a - b + c) * (1.0 - a - b - c);
  const double p2 =
      t4 + 16.0 * (a - b - c) * (-a + b - c) * (-a - b + c) * (2.0 - a - b - c);
  return {p1, p2};
}

// Both sides of the factorization: the achievability form with the mixed
// product removed, squared and reduced, against the boundary factor product.
inline std::pair<double, double> lambda_boundary_identity(double a, double b, double c, double t) {
  const double la = detail::linear_entropy(a);
  const double lb = detail::linear_entropy(b);
  const double lc = detail::linear_entropy(c);
  const double T = t * t;
  const double R1 = lb + lc - la - 0.5 * T;
  const double R2 = la + lc - lb - 0.5 * T;
  const double R3 = la + lb - lc - 0.5 * T;
  const double a_prime = T * (1.0 - R1 - R2 - R3 - T) - (R1 * R2 + R1 * R3 + R2 * R3);
  const auto [p1, p2] = boundary_factors(a, b, c, t);
  return {a_prime * a_prime - 4.0 * R1 * R2 * R3, p1 * p2 / 16.0};
}

}  // namespace tangles
