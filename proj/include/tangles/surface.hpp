#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tangles/constraints.hpp"

namespace tangles {

// Cubic evaluation grid over pair-tangle (or one-tangle) coordinates.
struct GridSpec {
  double lo = 0.0;
  double hi = 1.0;
  int points = 31;
  std::vector<double> t2_slices;  // squared tripartite tangle per slice

  double coordinate(int i) const { return lo + (hi - lo) * (static_cast<double>(i) / (points - 1)); }
};

enum class SurfaceField {
  achievability,   // achievability form at fixed squared tripartite tangle
  steiner_convex,  // convex-roof quartic bound margin
  steiner_concave, // concave-roof quartic bound margin
  steiner_null,    // the quartic radicand itself
  triangle,        // min marginal-eigenvalue triangle margin, coords are one-tangles
};

inline SurfaceField field_from_name(const std::string& name) {
  if (name == "achievability") return SurfaceField::achievability;
  if (name == "steiner-convex") return SurfaceField::steiner_convex;
  if (name == "steiner-concave") return SurfaceField::steiner_concave;
  if (name == "steiner-null") return SurfaceField::steiner_null;
  if (name == "triangle") return SurfaceField::triangle;
  throw std::invalid_argument("unknown surface field: " + name);
}

inline void check_grid(const GridSpec& g) {
  if (g.points < 2) throw std::invalid_argument("grid needs at least 2 points per axis");
  if (!std::isfinite(g.lo) || !std::isfinite(g.hi)) throw std::invalid_argument("grid bounds must be finite");
  if (g.lo > g.hi) throw std::invalid_argument("grid lower bound above upper bound");
  if (g.lo < -1.0 - 1e-12 || g.hi > 1.0 + 1e-12)
    throw std::domain_error("grid bounds outside [-1, 1]");
  for (double s : g.t2_slices) {
    if (!std::isfinite(s)) throw std::invalid_argument("slice values must be finite");
    if (std::abs(s) > 1.0 + 1e-12) throw std::domain_error("slice outside [-1, 1]");
  }
}

// Emits "x,y,z,t2,margin" rows over the grid. Only the achievability field
// uses the slices; the others emit a single sheet with t2 = 0.
inline void write_surface_csv(std::ostream& os, SurfaceField field, const GridSpec& grid) {
  check_grid(grid);
  std::vector<double> slices = grid.t2_slices;
  if (field != SurfaceField::achievability)
    slices = {0.0};
  else if (slices.empty())
    slices = {0.0};
  os << "x,y,z,t2,margin\n";
  char row[160];
  for (double t2 : slices) {
    for (int i = 0; i < grid.points; ++i) {
      const double x = grid.coordinate(i);
      for (int j = 0; j < grid.points; ++j) {
        const double y = grid.coordinate(j);
        for (int k = 0; k < grid.points; ++k) {
          const double z = grid.coordinate(k);
          double margin = 0.0;
          switch (field) {
            case SurfaceField::achievability:
              margin = achievability_lhs_t2(x, y, z, t2);
              break;
            case SurfaceField::steiner_convex:
              margin = steiner_margin(x, y, z, RoofMode::convex);
              break;
            case SurfaceField::steiner_concave:
              margin = steiner_margin(x, y, z, RoofMode::concave);
              break;
            case SurfaceField::steiner_null:
              margin = steiner_radicand(x, y, z);
              break;
            case SurfaceField::triangle: {
              const double la = 0.5 * (1.0 - std::sqrt(std::max(1.0 - x * x, 0.0)));
              const double lb = 0.5 * (1.0 - std::sqrt(std::max(1.0 - y * y, 0.0)));
              const double lc = 0.5 * (1.0 - std::sqrt(std::max(1.0 - z * z, 0.0)));
              const TriangleMargins tm = marginal_triangle_margins(la, lb, lc);
              margin = std::min({tm.margins[0], tm.margins[1], tm.margins[2]});
              break;
            }
          }
          std::snprintf(row, sizeof(row), "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, y, z, t2, margin);
          os << row;
        }
      }
    }
  }
}

}  // namespace tangles
