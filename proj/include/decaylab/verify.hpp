// verify.hpp: invariant suites shared by `decaylab verify` and the tests

#pragma once

#include "decaylab/bounds.hpp"
#include "decaylab/dynamics.hpp"
#include "decaylab/meson.hpp"
#include "decaylab/presets.hpp"
#include "decaylab/scalar.hpp"
#include "decaylab/units.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace decaylab {

struct SuiteResult {
    std::string preset;
    std::string suite;
    double max_residual{0.0};
    double tolerance{0.0};
    bool passed{true};
    std::optional<double> witness_t;  // time of the worst residual
    std::string note;                 // failure reason when the suite threw
};

namespace detail {

/// Tracks the worst residual of a suite and where it occurred.
class SuiteTracker {
public:
    SuiteTracker(std::string preset, std::string suite, double tol) {
        r_.preset = std::move(preset);
        r_.suite = std::move(suite);
        r_.tolerance = tol;
    }

    void record(double residual, double t) {
        if (!r_.witness_t || residual > r_.max_residual || std::isnan(residual)) {
            r_.max_residual = residual;
            r_.witness_t = t;
        }
    }

    SuiteResult finish() {
        r_.passed = r_.note.empty() && r_.max_residual <= r_.tolerance;
        return r_;
    }

    SuiteResult fail(const std::exception& e, double t) {
        r_.note = e.what();
        r_.witness_t = t;
        r_.max_residual = std::numeric_limits<double>::infinity();
        r_.passed = false;
        return r_;
    }

private:
    SuiteResult r_;
};

template <typename Body>
SuiteResult run_suite(const std::string& preset, const std::string& suite, double tol, Body&& body) {
    SuiteTracker tr(preset, suite, tol);
    double t_current = 0.0;
    try {
        body(tr, t_current);
    } catch (const std::exception& e) {
        return tr.fail(e, t_current);
    }
    return tr.finish();
}

inline std::vector<double> log_times(double lo, double hi, std::size_t n) {
    std::vector<double> ts(n);
    for (std::size_t i = 0; i < n; ++i)
        ts[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
    return ts;
}

}  // namespace detail

/// Minimum Choi eigenvalue of the meson map over 200 log-spaced times
/// spanning the region where the CP inequality can bind.
inline SuiteResult verify_meson_choi(const std::string& name, const MesonParams& p) {
    return detail::run_suite(name, "choi_psd", 1e-12, [&](detail::SuiteTracker& tr, double& t_now) {
        double scale = 1.0 / p.gamma_S;
        if (p.delta_L > 0.0 && necessary_delta_bound(p).ok) scale = t_plus(p);
        for (double t : detail::log_times(1e-4 * scale, 1e2 * scale, 200)) {
            t_now = t;
            tr.record(std::max(0.0, -min_eigenvalue(meson_choi(p, t))), t);
        }
    });
}

inline std::vector<SuiteResult> verify_meson(const std::string& name, const MesonParams& p, const CpViolation& e,
                                             double mass_mev) {
    std::vector<SuiteResult> out;
    const double tau = 1.0 / p.gamma_S;
    const std::vector<double> times{0.1 * tau, tau, 3.0 * tau, 10.0 * tau};
    const std::vector<MesonKind> kinds{MesonKind::K0, MesonKind::K0bar, MesonKind::KS, MesonKind::KL,
                                       MesonKind::K1, MesonKind::K2};

    out.push_back(verify_meson_choi(name, p));

    out.push_back(detail::run_suite(name, "metric_trace", 1e-13, [&](detail::SuiteTracker& tr, double& t_now) {
        for (auto k : kinds)
            for (double t : times) {
                t_now = t;
                const auto rho = evolve_tilde(prepare_tilde(k, e), p, t);
                tr.record(std::abs(state_trace(rho, p.delta_L) - 1.0), t);
            }
    }));

    out.push_back(detail::run_suite(name, "semigroup", 1e-12, [&](detail::SuiteTracker& tr, double& t_now) {
        auto evolve = [&](const TildeState& s, double t) { return evolve_tilde(s, p, t); };
        for (auto k : kinds) {
            t_now = 3.0 * tau;
            tr.record(semigroup_residual(evolve, prepare_tilde(k, e), tau, 2.0 * tau), t_now);
        }
    }));

    out.push_back(detail::run_suite(name, "kraus_completeness", 1e-11, [&](detail::SuiteTracker& tr, double& t_now) {
        for (double t : times) {
            t_now = t;
            tr.record(completeness_residual(kraus_breve(p, t)), t);
            tr.record(completeness_residual(kraus_orthonormal(p, e, t)), t);
        }
    }));

    out.push_back(detail::run_suite(name, "kraus_vs_closed_form", 1e-11, [&](detail::SuiteTracker& tr, double& t_now) {
        for (auto k : kinds)
            for (double t : times) {
                t_now = t;
                const auto rho0 = prepare_tilde(k, e);
                tr.record(max_abs_diff(apply_kraus(rho0.matrix, kraus_breve(p, t)), evolve_tilde(rho0, p, t).matrix),
                          t);
            }
    }));

    out.push_back(detail::run_suite(name, "master_equation_oracle", 1e-7, [&](detail::SuiteTracker& tr, double& t_now) {
        const LindbladModel model = meson_lindblad(p, e);
        for (auto k : {MesonKind::K0, MesonKind::KL}) {
            const auto rho0 = prepare_tilde(k, e);
            const CMatrix cp0 = to_basis(rho0, e, Basis::CpOrthonormal).matrix;
            t_now = tau;
            const CMatrix closed = to_basis(evolve_tilde(rho0, p, tau), e, Basis::CpOrthonormal).matrix;
            tr.record(max_abs_diff(integrate_master(model, cp0, tau), closed), tau);
        }
    }));

    out.push_back(detail::run_suite(name, "cpt_hamiltonian", 1e-12, [&](detail::SuiteTracker& tr, double&) {
        MesonParams pm = p;
        pm.mean_mass_freq = units::mev_to_rate(mass_mev);
        const CMatrix h = meson_lindblad(pm, e).hamiltonian;
        const double diff = std::abs(expectation(h, k0_cp()) - expectation(h, k0bar_cp()));
        tr.record(diff / pm.mean_mass_freq, 0.0);
    }));

    out.push_back(detail::run_suite(name, "reduction_no_cp_violation", 1e-12, [&](detail::SuiteTracker& tr, double& t_now) {
        MesonParams q = p;
        q.delta_L = 0.0;
        q.lambda = 0.0;
        const CpViolation e0{};
        for (double t : times) {
            t_now = t;
            const auto ks = kraus_breve(q, t);
            tr.record(completeness_residual(KrausSet{ks.operators, CMatrix::identity(3), ks.basis}), t);
            const auto rho = evolve_tilde(prepare_tilde(MesonKind::K0, e0), q, t);
            const double decay = 0.5 * (std::exp(-t * q.gamma_S) + std::exp(-t * q.gamma_L));
            tr.record(std::abs(rho.matrix(kS, kS).real() + rho.matrix(kL, kL).real() - decay), t);
        }
    }));
    return out;
}

inline std::vector<SuiteResult> verify_scalar(const std::string& name, const ScalarParams& p) {
    std::vector<SuiteResult> out;
    const double tau = 1.0 / p.gamma;
    const std::vector<double> times{0.1 * tau, tau, 3.0 * tau, 10.0 * tau};
    const ScalarState pion = ScalarState::pion();

    out.push_back(detail::run_suite(name, "choi_psd", 1e-12, [&](detail::SuiteTracker& tr, double& t_now) {
        for (double t : detail::log_times(1e-4 * tau, 1e2 * tau, 200)) {
            t_now = t;
            tr.record(std::max(0.0, -min_eigenvalue(scalar_choi(p, t))), t);
        }
    }));

    out.push_back(detail::run_suite(name, "trace", 1e-13, [&](detail::SuiteTracker& tr, double& t_now) {
        for (double t : times) {
            t_now = t;
            tr.record(std::abs(evolve_scalar_general(pion, p, t).rho.trace() - 1.0), t);
        }
    }));

    out.push_back(detail::run_suite(name, "semigroup", 1e-12, [&](detail::SuiteTracker& tr, double& t_now) {
        auto evolve = [&](const ScalarState& s, double t) { return evolve_scalar_general(s, p, t); };
        t_now = 0.6 * tau;
        tr.record(semigroup_residual(evolve, pion, 0.3 * tau, 0.3 * tau), t_now);
    }));

    out.push_back(detail::run_suite(name, "kraus_completeness_superselected", 1e-15,
                                    [&](detail::SuiteTracker& tr, double& t_now) {
                                        for (double t : times) {
                                            t_now = t;
                                            tr.record(completeness_residual(
                                                          scalar_kraus_superselected(p.gamma, p.mass_freq, t)),
                                                      t);
                                        }
                                    }));

    out.push_back(detail::run_suite(name, "kraus_completeness_general", 1e-11, [&](detail::SuiteTracker& tr, double& t_now) {
        for (double t : times) {
            t_now = t;
            tr.record(completeness_residual(scalar_kraus_general(p, t)), t);
        }
    }));

    out.push_back(detail::run_suite(name, "master_equation_oracle", 1e-7, [&](detail::SuiteTracker& tr, double& t_now) {
        const LindbladModel model = scalar_lindblad(p);
        t_now = tau;
        tr.record(max_abs_diff(integrate_master(model, pion.rho, tau), evolve_scalar_general(pion, p, tau).rho), tau);
    }));

    out.push_back(detail::run_suite(name, "survival_probability", 1e-14, [&](detail::SuiteTracker& tr, double& t_now) {
        for (std::size_t i = 0; i < 100; ++i) {
            const double t = 0.05 * tau * static_cast<double>(i);
            t_now = t;
            tr.record(std::abs(evolve_scalar_general(pion, p, t).rho(0, 0).real() - survival_probability(p.gamma, t)), t);
        }
    }));
    return out;
}

inline std::vector<SuiteResult> verify_preset(const ParticlePreset& preset) {
    if (preset.is_meson()) return verify_meson(preset.name, preset.meson, preset.epsilon, preset.mass_mev);
    return verify_scalar(preset.name, preset.scalar);
}

}  // namespace decaylab
