// scalar.hpp: the two-level particle ⊕ vacuum channel of an unstable (pseudo)scalar
// particle such as pi0
//
// Basis: |pi0> = (1, 0)^T, |0> = (0, 1)^T.  Rates in s^-1, times in s.

#pragma once

#include "decaylab/dynamics.hpp"
#include "decaylab/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace decaylab {

/// Parameters of the general scalar semigroup.
///
/// `z` is stored exactly as it multiplies the particle-to-coherence transfer
/// amplitude A11(t): it is a dimensionless prefactor on the generic branch and
/// carries s^-1 on the degenerate branch (lambda = gamma, mu = 0).
struct ScalarParams {
    double gamma{1.0};      // decay width Γ
    double mass_freq{0.0};  // m as an angular frequency
    double lambda{0.0};     // decoherence rate λ
    double mu{0.0};         // phase rate of A12; equals mass_freq for the physical family
    Complex z{};            // coherence-transfer amplitude

    static ScalarParams make(double gamma, double mass_freq, double lambda = 0.0, Complex z = {}) {
        return ScalarParams{gamma, mass_freq, lambda, mass_freq, z};
    }
};

inline void check_basic(const ScalarParams& p) {
    if (!(p.gamma > 0.0)) throw std::invalid_argument("ScalarParams: gamma must be > 0");
    if (!(p.lambda >= 0.0)) throw std::invalid_argument("ScalarParams: lambda must be >= 0");
    if (!(p.mu >= 0.0)) throw std::invalid_argument("ScalarParams: mu must be >= 0");
    if (p.lambda == 0.0 && p.z != Complex{}) {
        throw std::invalid_argument("ScalarParams: z must vanish when lambda = 0");
    }
}

namespace detail {

inline bool degenerate_branch(const ScalarParams& p) {
    return std::abs(p.lambda - p.gamma) <= 1e-9 * p.gamma && std::abs(p.mu) <= 1e-9 * p.gamma;
}

}  // namespace detail

struct ScalarState {
    CMatrix rho;

    static ScalarState pion() { return {CMatrix{{1.0, 0.0}, {0.0, 0.0}}}; }
    static ScalarState vacuum() { return {CMatrix{{0.0, 0.0}, {0.0, 1.0}}}; }

    /// Validating constructor: Hermitian, unit trace and PSD, each to 1e-12.
    static ScalarState from_matrix(const CMatrix& m) {
        if (m.dim() != 2) throw std::invalid_argument("ScalarState: expected a 2x2 matrix");
        if (hermiticity_defect(m) > 1e-12) throw std::domain_error("ScalarState: not Hermitian");
        if (std::abs(m.trace() - 1.0) > 1e-12) throw std::domain_error("ScalarState: trace differs from 1");
        if (!is_psd(m, 1e-12)) throw std::domain_error("ScalarState: not positive semidefinite");
        return {m};
    }
};

inline const CMatrix& as_matrix(const ScalarState& s) { return s.rho; }

// --------------------------- coefficient functions ---------------------------

struct ScalarCoefficients {
    Complex a11;
    Complex a12;
};

/// A12(t) = exp(-t[(Γ+λ)/2 + iμ]); A11 from the two-branch solution of the
/// composition law.
inline ScalarCoefficients scalar_coefficients(const ScalarParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "scalar_coefficients");
    const Complex a12 = std::polar(std::exp(-t * (p.gamma + p.lambda) / 2.0), -p.mu * t);
    Complex a11;
    if (detail::degenerate_branch(p)) {
        a11 = p.z * t * std::exp(-t * p.gamma);
    } else {
        a11 = p.z * (std::exp(-t * p.gamma) - a12);
    }
    return {a11, a12};
}

inline double survival_probability(double gamma, double t) {
    detail::require_time(t, "survival_probability");
    return std::exp(-t * gamma);
}

// --------------------------- closed-form evolution ---------------------------

inline ScalarState evolve_scalar_general(const ScalarState& rho0, const ScalarParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "evolve_scalar_general");
    if (std::abs(p.mu - p.mass_freq) > 1e-12 * std::max(std::abs(p.mass_freq), p.gamma)) {
        throw std::invalid_argument("evolve_scalar_general: mu must equal mass_freq");
    }
    const auto [a11, a12] = scalar_coefficients(p, t);
    const CMatrix& r = rho0.rho;
    const double decay = std::exp(-t * p.gamma);
    const Complex r11 = r(0, 0).real();
    const Complex r12 = a12 * r(0, 1) + a11 * r11;
    CMatrix out{{decay * r11, r12},
                {std::conj(r12), r(1, 1).real() - std::expm1(-t * p.gamma) * r11}};
    return {out};
}

/// The general linear map (on arbitrary 2x2 input) whose action on density
/// matrices is evolve_scalar_general.
inline LinearMap scalar_channel_map(const ScalarParams& p, double t) {
    const auto [a11, a12] = scalar_coefficients(p, t);
    const double decay = std::exp(-t * p.gamma);
    const double lost = -std::expm1(-t * p.gamma);
    return [=](const CMatrix& x) {
        return CMatrix{{decay * x(0, 0), a12 * x(0, 1) + a11 * x(0, 0)},
                       {std::conj(a12) * x(1, 0) + std::conj(a11) * x(0, 0), x(1, 1) + lost * x(0, 0)}};
    };
}

// --------------------------- complete positivity -----------------------------

/// Choi matrix written out entrywise (A21 = A22 = 0).
inline CMatrix scalar_choi(const ScalarParams& p, double t) {
    const auto [a11, a12] = scalar_coefficients(p, t);
    const double decay = std::exp(-t * p.gamma);
    return CMatrix{{decay, a11, 0.0, a12},
                   {std::conj(a11), -std::expm1(-t * p.gamma), 0.0, 0.0},
                   {0.0, 0.0, 0.0, 0.0},
                   {std::conj(a12), 0.0, 0.0, 1.0}};
}

/// |A12|^2 <= e^{-tΓ} and |A11|^2 <= (1 - e^{-tΓ})(e^{-tΓ} - |A12|^2), to 1e-12.
inline bool scalar_positivity_ok(const ScalarParams& p, double t) {
    const auto [a11, a12] = scalar_coefficients(p, t);
    const double decay = std::exp(-t * p.gamma);
    const double rhs = -std::expm1(-t * p.gamma) * (decay - std::norm(a12));
    return std::norm(a12) <= decay + 1e-12 && std::norm(a11) <= rhs + 1e-12;
}

struct ScalarZCheck {
    bool ok{true};
    double witness_t{0.0};  // first grid time that violates the bound, if any
    std::string reason;
};

/// Checks that z keeps every S_t completely positive: the positivity
/// inequality on a 64-point log grid over [1e-3/Γ, 20/Γ] plus its small-t
/// limit (alpha <= 1) and large-t limit.
inline ScalarZCheck scalar_z_admissible(const ScalarParams& p) {
    check_basic(p);
    if (p.z == Complex{}) return {};
    // large t: A11 decays no slower than the bound unless lambda vanishes
    if (p.lambda == 0.0) return {false, std::numeric_limits<double>::infinity(), "z != 0 requires lambda > 0"};

    // small t: |A11|^2 ~ |β|^2 t^2 against Γλ t^2
    double beta_sq;
    if (detail::degenerate_branch(p)) {
        beta_sq = std::norm(p.z);
    } else {
        beta_sq = std::norm(p.z) * (p.mu * p.mu + 0.25 * (p.gamma - p.lambda) * (p.gamma - p.lambda));
    }
    if (beta_sq > p.gamma * p.lambda * (1.0 + 1e-12)) return {false, 0.0, "small-t limit violated (alpha > 1)"};

    constexpr int kPoints = 64;
    const double lo = 1e-3 / p.gamma, hi = 20.0 / p.gamma;
    for (int k = 0; k < kPoints; ++k) {
        const double t = lo * std::pow(hi / lo, static_cast<double>(k) / (kPoints - 1));
        if (!scalar_positivity_ok(p, t)) return {false, t, "positivity inequality violated"};
    }
    return {};
}

// --------------------------- Kraus representations ---------------------------

inline KrausSet scalar_kraus_superselected(double gamma, double mass_freq, double t) {
    detail::require_time(t, "scalar_kraus_superselected");
    const CMatrix e0{{std::polar(std::exp(-t * gamma / 2.0), -mass_freq * t), 0.0}, {0.0, 1.0}};
    const CMatrix e1{{0.0, 0.0}, {std::sqrt(-std::expm1(-t * gamma)), 0.0}};
    return KrausSet{{e0, e1}, CMatrix::identity(2), Basis::Orthonormal};
}

/// Three-operator set of the general channel.  At lambda = 0 (which forces
/// z = 0) the decoherence operators degenerate and the superselected
/// two-operator set is returned instead.
inline KrausSet scalar_kraus_general(const ScalarParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "scalar_kraus_general");
    if (p.lambda == 0.0) return scalar_kraus_superselected(p.gamma, p.mass_freq, t);
    if (t == 0.0) return identity_kraus(2);

    const auto [a11, a12] = scalar_coefficients(p, t);
    const double lost = -std::expm1(-t * p.gamma);
    const double dephased = -std::expm1(-t * p.lambda);
    const double grow = std::exp(t * p.gamma);

    double radicand = lost - std::norm(a11) * grow / dephased;
    if (radicand < 0.0) {
        if (radicand < -1e-12) {
            throw std::domain_error("scalar_kraus_general: not completely positive at t = " + std::to_string(t) +
                                    " (radicand " + std::to_string(radicand) + ")");
        }
        radicand = 0.0;
    }

    const CMatrix e0{{a12, 0.0}, {0.0, 1.0}};
    const CMatrix e1{{0.0, 0.0}, {std::sqrt(radicand), 0.0}};
    const CMatrix e2{{std::exp(-t * p.gamma / 2.0) * std::sqrt(dephased), 0.0},
                     {std::conj(a11) * std::sqrt(grow) / std::sqrt(dephased), 0.0}};
    KrausSet ks{{e0, e1, e2}, CMatrix::identity(2), Basis::Orthonormal};
    prune_null_operators(ks);
    return ks;
}

// --------------------------- Lindblad generator ------------------------------

struct ScalarLindbladCoefficients {
    double alpha;
    Complex beta;
};

/// alpha = |β|^2 / (Γλ); β is the constant feeding ρ11 into the coherence,
/// β = z(im + (λ - Γ)/2) on the generic branch and β = z on the degenerate one.
inline ScalarLindbladCoefficients scalar_lindblad_coefficients(const ScalarParams& p) {
    check_basic(p);
    if (p.lambda == 0.0) return {0.0, Complex{}};
    if (detail::degenerate_branch(p)) return {std::norm(p.z) / (p.gamma * p.gamma), p.z};
    const Complex beta = p.z * Complex(0.5 * (p.lambda - p.gamma), p.mass_freq);
    const double alpha =
        std::norm(p.z) * (4.0 * p.mass_freq * p.mass_freq + (p.gamma - p.lambda) * (p.gamma - p.lambda)) /
        (4.0 * p.gamma * p.lambda);
    return {alpha, beta};
}

inline LindbladModel scalar_lindblad(const ScalarParams& p) {
    check_basic(p);
    const CMatrix h{{p.mass_freq, 0.0}, {0.0, 0.0}};
    if (p.lambda == 0.0) {
        return LindbladModel{h, {CMatrix{{0.0, 0.0}, {std::sqrt(p.gamma), 0.0}}}};
    }
    const auto [alpha, beta] = scalar_lindblad_coefficients(p);
    if (alpha > 1.0 + 1e-12) {
        throw std::domain_error("scalar_lindblad: z too large: L1 coefficient imaginary (alpha = " +
                                std::to_string(alpha) + ")");
    }
    const double sl = std::sqrt(p.lambda);
    const CMatrix l1{{0.0, 0.0}, {std::sqrt(p.gamma * std::max(0.0, 1.0 - alpha)), 0.0}};
    const CMatrix l2{{sl, 0.0}, {std::conj(beta) / sl, 0.0}};
    return LindbladModel{h, {l1, l2}};
}

}  // namespace decaylab
