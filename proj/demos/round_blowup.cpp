// Blow up the round sphere at both poles and walk through what comes out:
// one horizon at the equator, Schwarzschild masses, Theta = 0 and a constant
// Hawking mass along the flow.

#include <cstdio>

#include "thetalab/imcf_hawking.hpp"

using namespace thetalab;

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 1024;
  const auto bm = blowup_two(round_profile(n));
  const auto hs = find_horizons(bm);
  std::printf("horizons: %zu\n", hs.roots.size());
  for (const auto& r : hs.roots) std::printf("  t = %.12f (%s)\n", r.t, to_string(r.kind));

  const auto ms = masses(bm);
  std::printf("paper mass %.12f, fit mass %.12f\n", ms.paper_mass_p, ms.fit_mass_p);
  std::printf("equator area %.12f   16 pi m^2 = %.12f\n", sphere_area(bm, pi / 2),
              16 * pi * ms.fit_mass_p * ms.fit_mass_p);

  const auto th = theta(bm);
  std::printf("Theta = %g (%s)\n", th.theta, th.degenerate ? "degenerate" : "shell");

  const auto tr = symmetric_imcf(bm, th.t1, Pole::P);
  std::printf("%8s %14s %14s %14s\n", "tau", "area", "H", "hawking");
  for (std::size_t k = 0; k < tr.rows.size(); k += 64) {
    const auto& r = tr.rows[k];
    std::printf("%8.3f %14.6f %14.10f %14.12f\n", r.tau, r.area, r.H, r.hawking);
  }
  return 0;
}
