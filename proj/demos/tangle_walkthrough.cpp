// Computes the basic tangle vocabulary for a few named three-qubit states.

#include <cmath>
#include <cstdio>

#include "tangles/tangles.hpp"

namespace {

void show(const char* name, const tangles::Ket& psi) {
  const tangles::TangleTuple tt = tangles::tangle_tuple(psi);
  std::printf("%-10s  pair tangles (%.6f, %.6f, %.6f)  triple %.6f\n", name, tt.x, tt.y, tt.z,
              tt.t);
  for (int party = 0; party < 3; ++party)
    std::printf("            one-tangle[%d] = %.6f\n", party, tangles::one_tangle(psi, party));
}

}  // namespace

int main() {
  show("ghz", tangles::ghz_ket(3, 1 / std::sqrt(2.0), 1 / std::sqrt(2.0)));

  std::vector<tangles::cplx> w(8, 0.0);
  w[1] = w[2] = w[4] = 1 / std::sqrt(3.0);
  show("w", tangles::make_ket(3, w));

  // a generic state: everything is nonzero and the sharing identity
  // one_tangle^2 = x^2 + y^2 + t^2 still holds for party 0
  const tangles::Ket h = tangles::haar_random_ket(3, 7);
  show("haar", h);
  const tangles::TangleTuple tt = tangles::tangle_tuple(h);
  const double tau = tangles::one_tangle(h, 0);
  std::printf("sharing residual for party 0: %.2e\n",
              tau * tau - tt.y * tt.y - tt.z * tt.z - tt.t * tt.t);
  return 0;
}
