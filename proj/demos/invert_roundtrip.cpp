// Draws class coordinates, evaluates their tangles in closed form, then runs
// the inversion to recover the coordinates from the tangles alone.

#include <cmath>
#include <cstdio>
#include <numbers>

#include "tangles/tangles.hpp"

int main() {
  tangles::RandomStream rng(42, 0);
  tangles::GhzClassParams p;
  p.n = 3;
  p.r = 1.0 + 2.0 * rng.u01();
  p.kappa = -1.0;
  p.phis = {0.3 + rng.u01(), 0.3 + rng.u01(), 0.3 + rng.u01()};
  for (double& phi : p.phis) phi = std::min(phi, std::numbers::pi / 2);

  const tangles::TangleTuple tt = tangles::tuple_closed_form(p);
  std::printf("drawn      r=%.12f  phis=(%.6f, %.6f, %.6f)\n", p.r, p.phis[0], p.phis[1],
              p.phis[2]);
  std::printf("tangles    (%.6f, %.6f, %.6f, %.6f)\n", tt.x, tt.y, tt.z, tt.t);
  std::printf("margin     %.3e\n", tangles::achievability_lhs(tt.x, tt.y, tt.z, tt.t));

  const tangles::InversionReport rep = tangles::invert_tangles(tt);
  if (!rep.feasible || !rep.params) {
    std::printf("inversion reported infeasible (r=%.12f)\n", rep.r);
    return 1;
  }
  std::printf("recovered  r=%.12f  phis=(%.6f, %.6f, %.6f)\n", rep.params->r, rep.params->phis[0],
              rep.params->phis[1], rep.params->phis[2]);

  const tangles::TangleTuple back = tangles::tuple_closed_form(*rep.params);
  const double err = std::max({std::abs(back.x - tt.x), std::abs(back.y - tt.y),
                               std::abs(back.z - tt.z), std::abs(back.t - tt.t)});
  std::printf("round-trip tangle error %.2e\n", err);
  return 0;
}
