// Strangeness oscillation of an initial K0 with and without decoherence.

#include "decaylab/bounds.hpp"
#include "decaylab/meson.hpp"
#include "decaylab/presets.hpp"

#include <cstdio>

int main() {
    using namespace decaylab;
    const ParticlePreset k = preset_K0();
    const double lmax = lambda_max(k.meson).lambda_max;
    const MesonParams damped = k.meson.with_lambda(0.5 * lmax);
    const TildeState rho0 = prepare_tilde(MesonKind::K0, k.epsilon);
    const double tau = 1.0 / k.meson.gamma_S;

    std::printf("lambda_max = %.6e 1/s\n", lmax);
    std::printf("%8s %12s %12s %12s %12s\n", "t/tau_S", "p_K0", "p_K0bar", "<S>", "<S> damped");
    for (int i = 0; i <= 20; ++i) {
        const double t = 0.5 * i * tau;
        const auto d = detection_probabilities(rho0, k.meson, t);
        std::printf("%8.2f %12.8f %12.8f %12.8f %12.8f\n", 0.5 * i, d.p_K0, d.p_K0bar,
                    strangeness_expectation(rho0, k.meson, t), strangeness_expectation(rho0, damped, t));
    }
}
