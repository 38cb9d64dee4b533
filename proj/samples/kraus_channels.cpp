// Kraus form of the kaon channel and the Choi test on either side of lambda_max.

#include "decaylab/bounds.hpp"
#include "decaylab/dynamics.hpp"
#include "decaylab/meson.hpp"
#include "decaylab/presets.hpp"

#include <cmath>
#include <cstdio>

int main() {
    using namespace decaylab;
    const ParticlePreset k = preset_K0();
    const BoundReport rep = lambda_max(k.meson);
    const double t = 0.5 / k.meson.gamma_S;

    const MesonParams p = k.meson.with_lambda(0.5 * rep.lambda_max);
    const KrausSet ks = kraus_orthonormal(p, k.epsilon, t);
    std::printf("%zu Kraus operators, completeness residual %.3e\n", ks.operators.size(), completeness_residual(ks));

    for (double f : {0.95, 1.05}) {
        const MesonParams q = k.meson.with_lambda(f * rep.lambda_max);
        double worst = 0.0, where = 0.0;
        for (int i = 0; i <= 200; ++i) {
            const double s = rep.t_plus * 1e-4 * std::pow(1e6, i / 200.0);
            const double e = min_eigenvalue(meson_choi(q, s));
            if (e < worst) {
                worst = e;
                where = s;
            }
        }
        std::printf("lambda = %.2f lambda_max: min Choi eigenvalue %.3e at t = %.3e s\n", f, worst, where);
    }
}
