// Minimal library walkthrough: how strongly the polarization noise bends
// the transverse rate near the medium resonance, and where the cavity
// parameter stops being admissible.

#include <cstdio>

#include "lfdecay/decay_rates.hpp"
#include "lfdecay/rmin.hpp"

int main() {
    using namespace lfdecay;

    const LorentzMedium medium(1.0, 0.46, 0.05);
    const CavityGeometry geom = CavityGeometry::from_r(20.0);

    std::printf("# omega_a/omega_t   classical   with noise   longitudinal\n");
    for (double w = 0.90; w <= 1.2001; w += 0.02) {
        const Permittivity eps = epsilon_lorentz(medium, w);
        const RefractiveIndex n = refractive_index(eps);
        const Transition t(w);
        const RateBreakdown b = assemble_from_eq35(eps, n, t, geom);
        std::printf("%8.2f %16.6f %12.6f %14.6f\n", w, b.cl_perp, b.perp, b.par);
    }

    const RminResult bound = find_r_min(medium.gamma, SpectrumGrid::rmin_default());
    std::printf("\nadmissible cavity parameter: r >= %.4f (touches zero at omega_a = %.4f)\n",
                bound.r_min, bound.omega_critical);
    return 0;
}
