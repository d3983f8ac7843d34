// Helium at a modest expansion order: optimise mu, then the entropies of the
// one-electron reduced density matrix on a single coarse grid.

#include <cstdio>

#include "heliox/rdm_spectrum.hpp"
#include "heliox/variational.hpp"

int main() {
  const auto ground = heliox::optimize_mu(2.0, 8);
  std::printf("E  = %.10Lf hartree at mu = %.6Lf\n", ground.energy, ground.mu);

  const auto state = ground.expansion.cast<double>();
  const heliox::GridSpec grid{10.0, 300};
  const auto spectrum = heliox::spectrum_on_grid(state, grid, 6);
  for (const auto& rung : heliox::partial_wave_sums(spectrum, grid))
    std::printf("l_m = %d  S = %.7f  L = %.7f\n", rung.l_m, rung.S, rung.L);
  return 0;
}
