// Neutral pion decay: exponential survival and a decohering superposition.

#include "decaylab/presets.hpp"
#include "decaylab/scalar.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace decaylab;
    const ParticlePreset pi = preset_pi0();
    const double tau = 1.0 / pi.scalar.gamma;
    std::printf("%10s %14s %14s\n", "t/tau", "survival", "exp(-t/tau)");
    for (int i = 0; i <= 10; ++i) {
        const double t = 0.5 * i * tau;
        const double p = evolve_scalar_general(ScalarState::pion(), pi.scalar, t).rho(0, 0).real();
        std::printf("%10.2f %14.10f %14.10f\n", 0.5 * i, p, std::exp(-t / tau));
    }

    // pion/vacuum superposition under a channel with coherence transfer
    const ScalarParams p = ScalarParams::make(1.0, 0.7, 0.4, Complex(0.3, 0.1));
    const ScalarState plus = ScalarState::from_matrix(CMatrix{{0.5, 0.5}, {0.5, 0.5}});
    std::printf("\n%6s %12s %12s\n", "t", "|rho_12|", "rho_22");
    for (double t : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const CMatrix r = evolve_scalar_general(plus, p, t).rho;
        std::printf("%6.2f %12.8f %12.8f\n", t, std::abs(r(0, 1)), r(1, 1).real());
    }
}
