// Energy and volume of bumped Hopf fields on a cap, next to the Hopf values.
//
//   bump_demo [radius] [exponent]

#include <cstdio>
#include <cstdlib>

#include "hopfcert/hopfcert.hpp"

using namespace hopfcert;

int main(int argc, char** argv) {
  const double radius = argc > 1 ? std::atof(argv[1]) : 1.0;
  const int exponent = argc > 2 ? std::atoi(argv[2]) : 3;

  const CapDomain k(SpherePoint(), radius);
  const QuadratureRule rule = build_gauss_rule(k, {48, 24, 48});
  std::printf("cap radius %.3f, vol(K) = %.10f, E(H) = %.10f, vol(H) = %.10f\n\n", radius, cap_volume(k),
              hopf_energy(k), hopf_volume(k));
  std::printf("%8s %16s %16s %14s %14s %12s\n", "A", "E(v)", "vol(v)", "E - E(H)", "vol - vol(H)", "int s2/vol");

  for (double a : {-1.0, -0.5, 0.0, 0.25, 0.5, 1.0, 2.0}) {
    const UnitField v = perturbed_field(k, {a, exponent});
    const JetTable jets = sample_jets(v, rule);
    const double e = energy(rule, jets).value;
    const double vol = volume(rule, jets).value;
    const double s2 = integrate_values(rule, jets.sigma2).value / cap_volume(k);
    std::printf("%8.3f %16.10f %16.10f %14.3e %14.3e %12.9f\n", a, e, vol, e - hopf_energy(k), vol - hopf_volume(k), s2);
  }

  const CapDomain small(SpherePoint(), 0.1);
  const SmallCapStats s = small_cap_stats(small, {});
  std::printf("\nwithout the boundary condition (r = 0.1, transported field):\n");
  std::printf("  E(v) = %.6e < E(H) = %.6e\n", s.energy, hopf_energy(small));
  std::printf("  vol(v) = %.6e < vol(H) = %.6e\n", s.volume, hopf_volume(small));
}
