// Emits the CSV slices behind the feasibility figures. Pipe to a file and
// plot margin >= 0 per t2 slice to see the feasible body shrink.

#include <iostream>

#include "tangles/tangles.hpp"

int main(int argc, char** argv) {
  tangles::GridSpec grid;
  grid.points = 41;
  grid.t2_slices = {0.98, 0.64, 0.09, 0.0, -0.01, -0.25};
  const std::string name = argc > 1 ? argv[1] : "achievability";
  tangles::write_surface_csv(std::cout, tangles::field_from_name(name), grid);
  return 0;
}
