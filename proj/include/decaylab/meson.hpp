// meson.hpp: the three-level K0/B0 ⊕ vacuum channel with CP violation
//
// Three representations of the same state are used:
//   * CP-orthonormal  {|K1>, |K2>, |0>}    (matrix elements, ρ)
//   * strangeness     {|K0>, |K0bar>, |0>}  (matrix elements)
//   * SL tilde        coefficients ρ~ over the non-orthogonal dyads |i><j|,
//                     i, j in {KS, KL, 0}; ρ = V ρ~ V^†
// Traces and completeness sums in the tilde representation are taken against
// the Gram matrix g = V^† V.

#pragma once

#include "decaylab/dynamics.hpp"
#include "decaylab/linalg.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace decaylab {

/// Index of each basis label inside 3x3 meson matrices.
inline constexpr std::size_t kS = 0, kL = 1, kVac = 2;

struct MesonParams {
    double gamma_S{1.0};         // Γ_S
    double gamma_L{1.0};         // Γ_L
    double delta_m{0.0};         // Δm = m_L - m_S
    double delta_L{0.0};         // <KS|KL>
    double lambda{0.0};          // decoherence λ
    double mean_mass_freq{0.0};  // m; only shifts phases of the vacuum coherences

    double gamma() const { return 0.5 * (gamma_S + gamma_L); }
    double delta_gamma() const { return gamma_S - gamma_L; }
    double m_S() const { return mean_mass_freq - 0.5 * delta_m; }
    double m_L() const { return mean_mass_freq + 0.5 * delta_m; }

    MesonParams with_lambda(double l) const {
        MesonParams p = *this;
        p.lambda = l;
        return p;
    }
};

inline void check_basic(const MesonParams& p) {
    if (!(p.gamma_S > 0.0) || !(p.gamma_L > 0.0)) throw std::invalid_argument("MesonParams: widths must be > 0");
    if (!(p.lambda >= 0.0)) throw std::invalid_argument("MesonParams: lambda must be >= 0");
    if (!(p.delta_L >= 0.0 && p.delta_L < 1.0)) throw std::invalid_argument("MesonParams: delta_L must lie in [0, 1)");
    if (!(p.delta_m >= 0.0)) throw std::invalid_argument("MesonParams: delta_m must be >= 0");
}

struct CpViolation {
    Complex epsilon{};
};

inline double delta_L_from_epsilon(const CpViolation& e) {
    if (!(std::abs(e.epsilon) < 1.0)) throw std::invalid_argument("delta_L_from_epsilon: |epsilon| must be < 1");
    return 2.0 * e.epsilon.real() / (1.0 + std::norm(e.epsilon));
}

/// epsilon with the given delta_L and modulus (requires the modulus to be
/// at least the real part this delta_L forces).
inline CpViolation epsilon_from_delta_L(double delta_L, double modulus) {
    const double re = 0.5 * delta_L * (1.0 + modulus * modulus);
    if (re > modulus) throw std::invalid_argument("epsilon_from_delta_L: modulus too small for delta_L");
    return {Complex(re, std::sqrt(modulus * modulus - re * re))};
}

/// Real epsilon with 2 Re(eps)/(1 + |eps|^2) = delta_L (the small root).
inline CpViolation real_epsilon_from_delta_L(double delta_L) {
    if (delta_L == 0.0) return {};
    return {Complex(delta_L / (1.0 + std::sqrt(1.0 - delta_L * delta_L)), 0.0)};
}

namespace detail {

inline void require_consistent(const MesonParams& p, const CpViolation& e, const char* who) {
    if (std::abs(delta_L_from_epsilon(e) - p.delta_L) > 1e-12) {
        throw std::invalid_argument(std::string(who) + ": delta_L inconsistent with epsilon");
    }
}

/// 1 - exp(-w) without cancellation for small |w|.
inline Complex one_minus_exp(Complex w) {
    const double a = w.real(), b = w.imag();
    const double s = std::sin(0.5 * b);
    const double re = -std::expm1(-a) + std::exp(-a) * 2.0 * s * s;
    const double im = std::exp(-a) * std::sin(b);
    return {re, im};
}

}  // namespace detail

// --------------------------- bases and metric --------------------------------

struct MesonBasisVectors {
    CVector k1, k2, ks, kl;
};

/// K1, K2, KS, KL written in the strangeness basis {|K0>, |K0bar>, |0>}.
inline MesonBasisVectors basis_vectors(const CpViolation& e) {
    const double r = 1.0 / std::sqrt(2.0);
    const double n = 1.0 / std::sqrt(1.0 + std::norm(e.epsilon));
    const CVector k1{r, r, 0.0}, k2{r, -r, 0.0};
    CVector ks(3), kl(3);
    for (std::size_t i = 0; i < 3; ++i) {
        ks[i] = n * (k1[i] + e.epsilon * k2[i]);
        kl[i] = n * (e.epsilon * k1[i] + k2[i]);
    }
    return {k1, k2, ks, kl};
}

/// Columns are the CP-basis coordinates of |KS>, |KL>, |0>.
inline CMatrix v_matrix(const CpViolation& e) {
    const double n = 1.0 / std::sqrt(1.0 + std::norm(e.epsilon));
    return CMatrix{{n, e.epsilon * n, 0.0}, {e.epsilon * n, n, 0.0}, {0.0, 0.0, 1.0}};
}

inline CMatrix g_matrix(double delta_L) {
    return CMatrix{{1.0, delta_L, 0.0}, {delta_L, 1.0, 0.0}, {0.0, 0.0, 1.0}};
}

inline CMatrix g_inverse(double delta_L) {
    const double f = 1.0 / (1.0 - delta_L * delta_L);
    return CMatrix{{f, -delta_L * f, 0.0}, {-delta_L * f, f, 0.0}, {0.0, 0.0, 1.0}};
}

/// Real orthogonal involution between CP and strangeness coordinates.
inline CMatrix cp_strangeness_transform() {
    const double r = 1.0 / std::sqrt(2.0);
    return CMatrix{{r, r, 0.0}, {r, -r, 0.0}, {0.0, 0.0, 1.0}};
}

/// |K0>, |K0bar> in CP coordinates.
inline CVector k0_cp() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, r, 0.0};
}

inline CVector k0bar_cp() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, -r, 0.0};
}

// --------------------------- states ------------------------------------------

/// A meson-vacuum density operator in one of the three representations.
struct MesonState {
    CMatrix matrix;
    Basis basis{Basis::SlTilde};
};

using TildeState = MesonState;

inline const CMatrix& as_matrix(const MesonState& s) { return s.matrix; }

/// tr ρ, evaluated as tr(ρ~ g) in the tilde representation.
inline Complex state_trace(const MesonState& s, double delta_L) {
    if (s.basis == Basis::SlTilde) return (s.matrix * g_matrix(delta_L)).trace();
    return s.matrix.trace();
}

inline bool is_superselected(const MesonState& s, double tol = 1e-12) {
    const CMatrix& m = s.matrix;
    return std::abs(m(kS, kVac)) <= tol && std::abs(m(kL, kVac)) <= tol && std::abs(m(kVac, kS)) <= tol &&
           std::abs(m(kVac, kL)) <= tol;
}

/// Positivity is a property of the operator, so it is checked on the
/// orthonormal matrix.
inline MesonState to_basis(const MesonState& s, const CpViolation& e, Basis target) {
    if (s.basis == target) return s;
    if (s.basis == Basis::Orthonormal || target == Basis::Orthonormal) {
        throw std::invalid_argument("to_basis: meson states use the CP, strangeness or tilde representation");
    }
    CMatrix cp;
    switch (s.basis) {
        case Basis::CpOrthonormal: cp = s.matrix; break;
        case Basis::Strangeness: {
            const CMatrix w = cp_strangeness_transform();
            cp = w * s.matrix * w;
            break;
        }
        case Basis::SlTilde: {
            const CMatrix v = v_matrix(e);
            cp = v * s.matrix * v.adjoint();
            break;
        }
        default: break;
    }
    switch (target) {
        case Basis::CpOrthonormal: return {cp, target};
        case Basis::Strangeness: {
            const CMatrix w = cp_strangeness_transform();
            return {w * cp * w, target};
        }
        case Basis::SlTilde: {
            const CMatrix vi = inverse(v_matrix(e));
            return {vi * cp * vi.adjoint(), target};
        }
        default: break;
    }
    throw std::logic_error("to_basis: unreachable");
}

enum class MesonKind { K0, K0bar, KS, KL, K1, K2, Vacuum };

inline const char* to_string(MesonKind k) {
    switch (k) {
        case MesonKind::K0: return "K0";
        case MesonKind::K0bar: return "K0bar";
        case MesonKind::KS: return "KS";
        case MesonKind::KL: return "KL";
        case MesonKind::K1: return "K1";
        case MesonKind::K2: return "K2";
        case MesonKind::Vacuum: return "vacuum";
    }
    return "?";
}

/// Pure initial states in the tilde representation, closed form.  K1 and K2
/// depend on the phase of epsilon, not only on delta_L; use the
/// CpViolation overload for those.
inline TildeState prepare_tilde(MesonKind kind, double delta_L) {
    if (!(delta_L >= 0.0 && delta_L < 1.0)) throw std::invalid_argument("prepare_tilde: delta_L must lie in [0, 1)");
    CMatrix m = CMatrix::zero(3);
    switch (kind) {
        case MesonKind::KS: m(kS, kS) = 1.0; break;
        case MesonKind::KL: m(kL, kL) = 1.0; break;
        case MesonKind::Vacuum: m(kVac, kVac) = 1.0; break;
        case MesonKind::K0: {
            const double c = 1.0 / (2.0 * (1.0 + delta_L));
            m(kS, kS) = m(kL, kL) = m(kS, kL) = m(kL, kS) = c;
            break;
        }
        case MesonKind::K0bar: {
            const double c = 1.0 / (2.0 * (1.0 - delta_L));
            m(kS, kS) = m(kL, kL) = c;
            m(kS, kL) = m(kL, kS) = -c;
            break;
        }
        case MesonKind::K1:
        case MesonKind::K2:
            throw std::invalid_argument("prepare_tilde: K1/K2 need the full epsilon, not only delta_L");
    }
    return {m, Basis::SlTilde};
}

/// Any pure initial state, by mapping its CP-basis projector through V^{-1}.
inline TildeState prepare_tilde(MesonKind kind, const CpViolation& e) {
    CVector psi(3);
    const double r = 1.0 / std::sqrt(2.0);
    switch (kind) {
        case MesonKind::K1: psi = {1.0, 0.0, 0.0}; break;
        case MesonKind::K2: psi = {0.0, 1.0, 0.0}; break;
        case MesonKind::K0: psi = {r, r, 0.0}; break;
        case MesonKind::K0bar: psi = {r, -r, 0.0}; break;
        case MesonKind::Vacuum: psi = {0.0, 0.0, 1.0}; break;
        case MesonKind::KS: return prepare_tilde(kind, delta_L_from_epsilon(e));
        case MesonKind::KL: return prepare_tilde(kind, delta_L_from_epsilon(e));
    }
    return to_basis(MesonState{outer(psi, psi), Basis::CpOrthonormal}, e, Basis::SlTilde);
}

// --------------------------- propagator --------------------------------------

struct MesonCoefficients {
    Complex a_SL;  // S-L coherence
    Complex b_S0;  // S-vacuum coherence
    Complex c_L0;  // L-vacuum coherence
    double d_SS;   // S population feeding the vacuum
    double d_LL;   // L population feeding the vacuum
    Complex d_SL;  // S-L coherence feeding the vacuum
};

inline MesonCoefficients coefficient_functions(const MesonParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "coefficient_functions");
    const double l = p.lambda;
    const Complex w(t * (p.gamma() + l), -t * p.delta_m);
    MesonCoefficients c;
    c.a_SL = std::exp(-w);
    c.b_S0 = std::polar(std::exp(-t * (0.5 * p.gamma_S + l)), -t * p.m_S());
    c.c_L0 = std::polar(std::exp(-t * (0.5 * p.gamma_L + l)), -t * p.m_L());
    c.d_SS = -std::expm1(-t * p.gamma_S);
    c.d_LL = -std::expm1(-t * p.gamma_L);
    c.d_SL = p.delta_L * detail::one_minus_exp(w);
    return c;
}

/// Closed-form evolution of a physical (superselected) tilde state.
inline TildeState evolve_tilde(const TildeState& rho0, const MesonParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "evolve_tilde");
    if (rho0.basis != Basis::SlTilde) throw std::invalid_argument("evolve_tilde: state is not in the tilde representation");
    if (rho0.matrix.dim() != 3) throw std::invalid_argument("evolve_tilde: expected a 3x3 matrix");
    if (!is_superselected(rho0)) throw std::domain_error("evolve_tilde: superselection violated");

    const auto c = coefficient_functions(p, t);
    const CMatrix& r = rho0.matrix;
    CMatrix out = CMatrix::zero(3);
    out(kS, kS) = std::exp(-t * p.gamma_S) * r(kS, kS).real();
    out(kL, kL) = std::exp(-t * p.gamma_L) * r(kL, kL).real();
    out(kS, kL) = c.a_SL * r(kS, kL);
    out(kL, kS) = std::conj(out(kS, kL));
    out(kVac, kVac) = c.d_SS * r(kS, kS).real() + c.d_LL * r(kL, kL).real() + 2.0 * (c.d_SL * r(kS, kL)).real() +
                      r(kVac, kVac).real();
    return {out, Basis::SlTilde};
}

/// The full linear map on arbitrary 3x3 coefficient matrices, including the
/// vacuum coherences that physical states never populate.
inline LinearMap tilde_channel_map(const MesonParams& p, double t) {
    const auto c = coefficient_functions(p, t);
    const double es = std::exp(-t * p.gamma_S), el = std::exp(-t * p.gamma_L);
    return [=](const CMatrix& x) {
        CMatrix y = CMatrix::zero(3);
        y(kS, kS) = es * x(kS, kS);
        y(kL, kL) = el * x(kL, kL);
        y(kS, kL) = c.a_SL * x(kS, kL);
        y(kL, kS) = std::conj(c.a_SL) * x(kL, kS);
        y(kS, kVac) = c.b_S0 * x(kS, kVac);
        y(kVac, kS) = std::conj(c.b_S0) * x(kVac, kS);
        y(kL, kVac) = c.c_L0 * x(kL, kVac);
        y(kVac, kL) = std::conj(c.c_L0) * x(kVac, kL);
        y(kVac, kVac) = c.d_SS * x(kS, kS) + c.d_LL * x(kL, kL) + c.d_SL * x(kS, kL) + std::conj(c.d_SL) * x(kL, kS) +
                        x(kVac, kVac);
        return y;
    };
}

/// 9x9 Choi matrix of the tilde map.
inline CMatrix meson_choi(const MesonParams& p, double t) { return choi_matrix(tilde_channel_map(p, t), 3); }

// --------------------------- Kraus representations ---------------------------

namespace detail {

/// The six breve matrices without pruning, in their fixed order.
inline std::vector<CMatrix> breve_operators(const MesonParams& p, double t) {
    const double l = p.lambda;
    const double ds = -std::expm1(-t * p.gamma_S), dl = -std::expm1(-t * p.gamma_L);
    const Complex one_minus_a = one_minus_exp(Complex(t * (p.gamma() + l), -t * p.delta_m));
    const double dephased = -std::expm1(-t * l);

    double radicand = ds - p.delta_L * p.delta_L * std::norm(one_minus_a) / dl;
    if (radicand < 0.0) {
        if (radicand < -1e-12 * ds) {
            throw std::domain_error("kraus_breve: not completely positive at t = " + std::to_string(t) +
                                    " (negative radicand " + std::to_string(radicand) + ")");
        }
        radicand = 0.0;
    }

    std::vector<CMatrix> ops(6, CMatrix::zero(3));
    ops[0](kS, kS) = std::polar(std::exp(-t * 0.5 * (p.gamma_S + l)), -t * p.m_S());
    ops[0](kL, kL) = std::polar(std::exp(-t * 0.5 * (p.gamma_L + l)), -t * p.m_L());
    ops[0](kVac, kVac) = std::exp(-t * 0.5 * l);
    ops[1](kVac, kS) = std::sqrt(radicand);
    ops[2](kVac, kS) = p.delta_L * one_minus_a / std::sqrt(dl);
    ops[2](kVac, kL) = std::sqrt(dl);
    ops[3](kS, kS) = std::exp(-t * 0.5 * p.gamma_S) * std::sqrt(dephased);
    ops[4](kL, kL) = std::exp(-t * 0.5 * p.gamma_L) * std::sqrt(dephased);
    ops[5](kVac, kVac) = std::sqrt(dephased);
    return ops;
}

}  // namespace detail

/// Operators acting on the tilde coefficients, ρ~(t) = sum E ρ~(0) E^†,
/// complete with respect to the metric g.  Fails with the negative radicand
/// when complete positivity is violated at t.
inline KrausSet kraus_breve(const MesonParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "kraus_breve");
    if (t == 0.0) return KrausSet{{CMatrix::identity(3)}, g_matrix(p.delta_L), Basis::SlTilde};
    KrausSet ks{detail::breve_operators(p, t), g_matrix(p.delta_L), Basis::SlTilde};
    prune_null_operators(ks);
    return ks;
}

/// E_i = V E~breve_i V^{-1} in the CP-orthonormal basis.
inline KrausSet kraus_orthonormal(const MesonParams& p, const CpViolation& e, double t) {
    detail::require_consistent(p, e, "kraus_orthonormal");
    const KrausSet breve = kraus_breve(p, t);
    const CMatrix v = v_matrix(e), vi = inverse(v);
    KrausSet ks{{}, CMatrix::identity(3), Basis::CpOrthonormal};
    for (const auto& b : breve.operators) ks.operators.push_back(v * b * vi);
    return ks;
}

/// Dyad coefficients of the Kraus operators, E~_i = E~breve_i g^{-1}, all six.
inline std::vector<CMatrix> kraus_dyad(const MesonParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "kraus_dyad");
    const CMatrix gi = g_inverse(p.delta_L);
    std::vector<CMatrix> out;
    for (const auto& b : detail::breve_operators(p, t)) out.push_back(b * gi);
    return out;
}

/// The same dyad coefficients assembled term by term from the closed-form
/// expressions in |KS>, |KL>, |0>.
inline std::vector<CMatrix> kraus_dyad_explicit(const MesonParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "kraus_dyad_explicit");
    const double d = p.delta_L, f = 1.0 / (1.0 - d * d), l = p.lambda;
    const Complex as = std::polar(std::exp(-t * 0.5 * (p.gamma_S + l)), -t * p.m_S());
    const Complex al = std::polar(std::exp(-t * 0.5 * (p.gamma_L + l)), -t * p.m_L());
    const double ds = -std::expm1(-t * p.gamma_S), dl = -std::expm1(-t * p.gamma_L), sdl = std::sqrt(dl);
    const Complex one_minus_a = detail::one_minus_exp(Complex(t * (p.gamma() + l), -t * p.delta_m));
    const double root1 = std::sqrt(std::max(0.0, ds - d * d * std::norm(one_minus_a) / dl));
    const double dephased = std::sqrt(-std::expm1(-t * l));

    std::vector<CMatrix> e(6, CMatrix::zero(3));
    e[0](kS, kS) = f * as;
    e[0](kL, kL) = f * al;
    e[0](kS, kL) = -d * f * as;
    e[0](kL, kS) = -d * f * al;
    e[0](kVac, kVac) = std::exp(-t * 0.5 * l);

    e[1](kVac, kS) = f * root1;
    e[1](kVac, kL) = -d * f * root1;

    e[2](kVac, kL) = f * (sdl - d * d * one_minus_a / sdl);
    e[2](kVac, kS) = -d * f * (sdl - one_minus_a / sdl);

    const double e3 = std::exp(-t * 0.5 * p.gamma_S) * dephased * f;
    e[3](kS, kS) = e3;
    e[3](kS, kL) = -d * e3;
    const double e4 = std::exp(-t * 0.5 * p.gamma_L) * dephased * f;
    e[4](kL, kL) = e4;
    e[4](kL, kS) = -d * e4;

    e[5](kVac, kVac) = dephased;
    return e;
}

// --------------------------- Lindblad generator ------------------------------

/// Hamiltonian and Lindblad operators as dyad coefficients over
/// {|KS>, |KL>, |0>} (operator X = V X~ V^† in the CP basis).
struct MesonGeneratorDyads {
    CMatrix hamiltonian;
    std::vector<CMatrix> lindblad_ops;
};

inline MesonGeneratorDyads meson_lindblad_dyads(const MesonParams& p) {
    check_basic(p);
    const double d = p.delta_L, f = 1.0 / (1.0 - d * d), l = p.lambda, gl = p.gamma_L;
    const Complex zeta(p.gamma() + l, -p.delta_m);  // Γ + λ - iΔm

    double radicand = p.gamma_S - d * d * std::norm(zeta) / gl;
    if (radicand < 0.0) {
        if (radicand < -1e-12 * p.gamma_S) {
            throw std::domain_error("meson_lindblad: Lindblad family invalid: L1 coefficient imaginary");
        }
        radicand = 0.0;
    }

    std::vector<CMatrix> ls(5, CMatrix::zero(3));
    const double c1 = std::sqrt(radicand) * f;
    ls[0](kVac, kS) = c1;
    ls[0](kVac, kL) = -d * c1;

    const double sg = std::sqrt(gl);
    ls[1](kVac, kL) = f * (sg - d * d * zeta / sg);
    ls[1](kVac, kS) = -d * f * (sg - zeta / sg);

    const double sl = std::sqrt(l);
    ls[2](kS, kS) = sl * f;
    ls[2](kS, kL) = -d * sl * f;
    ls[3](kL, kL) = sl * f;
    ls[3](kL, kS) = -d * sl * f;
    ls[4](kVac, kVac) = sl;

    const double m = p.mean_mass_freq, quarter_dg = 0.25 * p.delta_gamma();
    CMatrix h = CMatrix::zero(3);
    h(kS, kS) = f * p.m_S();
    h(kL, kL) = f * p.m_L();
    h(kS, kL) = -d * f * Complex(m, -quarter_dg);
    h(kL, kS) = -d * f * Complex(m, quarter_dg);

    return {h, ls};
}

/// Lindblad model in the CP-orthonormal basis.
inline LindbladModel meson_lindblad(const MesonParams& p, const CpViolation& e) {
    detail::require_consistent(p, e, "meson_lindblad");
    const auto dy = meson_lindblad_dyads(p);
    const CMatrix v = v_matrix(e), vd = v.adjoint();
    LindbladModel model{hermitian_part(v * dy.hamiltonian * vd), {}};
    for (const auto& l : dy.lindblad_ops)
        if (frobenius_norm(l) > 0.0) model.lindblad_ops.push_back(v * l * vd);
    return model;
}

// --------------------------- observables -------------------------------------

struct DetectionProbabilities {
    double p_K0;
    double p_K0bar;
    double p_vac;
};

/// Probabilities of finding K0, K0bar at t, from the initial tilde
/// coefficients; p_vac closes the sum.
inline DetectionProbabilities detection_probabilities(const TildeState& rho0, const MesonParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "detection_probabilities");
    if (!is_superselected(rho0)) throw std::domain_error("detection_probabilities: superselection violated");
    const CMatrix& r = rho0.matrix;
    const double d = p.delta_L;
    const double pops = std::exp(-t * p.gamma_S) * r(kS, kS).real() + std::exp(-t * p.gamma_L) * r(kL, kL).real();
    const double coh = 2.0 * (std::exp(-Complex(t * (p.gamma() + p.lambda), -t * p.delta_m)) * r(kS, kL)).real();
    const double pk = 0.5 * (1.0 + d) * (pops + coh);
    const double pkbar = 0.5 * (1.0 - d) * (pops - coh);
    return {pk, pkbar, 1.0 - pk - pkbar};
}

/// <S> = tr(ρ(t) (|K0><K0| - |K0bar><K0bar|))
inline double strangeness_expectation(const TildeState& rho0, const MesonParams& p, double t) {
    check_basic(p);
    detail::require_time(t, "strangeness_expectation");
    if (!is_superselected(rho0)) throw std::domain_error("strangeness_expectation: superselection violated");
    const CMatrix& r = rho0.matrix;
    const double pops = std::exp(-t * p.gamma_S) * r(kS, kS).real() + std::exp(-t * p.gamma_L) * r(kL, kL).real();
    const double coh = 2.0 * (std::exp(-Complex(t * (p.gamma() + p.lambda), -t * p.delta_m)) * r(kS, kL)).real();
    return p.delta_L * pops + coh;
}

}  // namespace decaylab
