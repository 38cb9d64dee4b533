// dynamics.hpp: representation-independent channel machinery (Kraus sets, Lindblad
// integration, Choi matrices, semigroup checks)

#pragma once

#include "decaylab/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace decaylab {

namespace detail {

inline void require_time(double t, const char* who) {
    if (!(t >= 0.0)) throw std::invalid_argument(std::string(who) + ": negative time");
}

}  // namespace detail

/// Which matrix representation a state or operator set is written in.
enum class Basis {
    Orthonormal,    // generic orthonormal basis, e.g. {|pi0>, |0>}
    CpOrthonormal,  // {|K1>, |K2>, |0>}
    Strangeness,    // {|K0>, |K0bar>, |0>}
    SlTilde,        // coefficients over the non-orthogonal dyads of {|KS>, |KL>, |0>}
};

inline const char* to_string(Basis b) {
    switch (b) {
        case Basis::Orthonormal: return "orthonormal";
        case Basis::CpOrthonormal: return "cp-orthonormal";
        case Basis::Strangeness: return "strangeness";
        case Basis::SlTilde: return "sl-tilde";
    }
    return "?";
}

/// Operator-sum representation.  Trace preservation reads
/// sum_i K_i^† · metric · K_i = metric; the metric is the identity in
/// orthonormal representations and the Gram matrix g in the tilde one.
struct KrausSet {
    std::vector<CMatrix> operators;
    CMatrix metric;
    Basis basis{Basis::Orthonormal};

    std::size_t dim() const { return metric.dim(); }
};

inline KrausSet identity_kraus(std::size_t dim, Basis basis = Basis::Orthonormal) {
    return KrausSet{{CMatrix::identity(dim)}, CMatrix::identity(dim), basis};
}

/// Drops operators that vanish to roundoff (e.g. decoherence terms at lambda = 0).
inline void prune_null_operators(KrausSet& ks, double tol = 1e-15) {
    std::erase_if(ks.operators, [tol](const CMatrix& k) { return frobenius_norm(k) < tol; });
}

struct LindbladModel {
    CMatrix hamiltonian;
    std::vector<CMatrix> lindblad_ops;

    std::size_t dim() const { return hamiltonian.dim(); }

    /// K = -1/2 sum L^† L
    CMatrix damping() const {
        CMatrix k = CMatrix::zero(dim());
        for (const auto& l : lindblad_ops) k += l.adjoint() * l;
        return k * -0.5;
    }
};

inline void validate(const LindbladModel& model) {
    const double tol = 1e-12 * std::max(1.0, frobenius_norm(model.hamiltonian));
    if (hermiticity_defect(model.hamiltonian) > tol) {
        throw std::domain_error("LindbladModel: Hamiltonian not Hermitian");
    }
    for (const auto& l : model.lindblad_ops)
        if (l.dim() != model.dim()) throw std::invalid_argument("LindbladModel: operator dimension mismatch");
}

// --------------------------- Kraus application -------------------------------

inline CMatrix apply_kraus(const CMatrix& state, const KrausSet& ks) {
    if (state.dim() != ks.dim()) {
        throw std::invalid_argument("apply_kraus: state dimension " + std::to_string(state.dim()) +
                                    " does not match Kraus dimension " + std::to_string(ks.dim()));
    }
    CMatrix out = CMatrix::zero(state.dim());
    for (const auto& k : ks.operators) out += k * state * k.adjoint();
    return out;
}

/// ‖sum_i K_i^† metric K_i - metric‖_F
inline double completeness_residual(const KrausSet& ks) {
    CMatrix s = CMatrix::zero(ks.dim());
    for (const auto& k : ks.operators) s += k.adjoint() * ks.metric * k;
    return frobenius_norm(s - ks.metric);
}

// --------------------------- Choi matrices -----------------------------------

using LinearMap = std::function<CMatrix(const CMatrix&)>;

/// C[(i·d + k), (j·d + l)] = map(|i><j|)[k, l]
inline CMatrix choi_matrix(const LinearMap& map, std::size_t dim) {
    CMatrix c(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) {
            const CMatrix img = map(CMatrix::unit(dim, i, j));
            for (std::size_t k = 0; k < dim; ++k)
                for (std::size_t l = 0; l < dim; ++l) c(i * dim + k, j * dim + l) = img(k, l);
        }
    return c;
}

/// (map_a ⊗ map_b)(X) for X on the dim_a·dim_b product space, expanded over matrix units.
inline CMatrix apply_product_map(const LinearMap& map_a, std::size_t dim_a, const LinearMap& map_b,
                                 std::size_t dim_b, const CMatrix& x) {
    if (x.dim() != dim_a * dim_b) throw std::invalid_argument("apply_product_map: dimension mismatch");
    std::vector<CMatrix> img_a, img_b;
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_a; ++j) img_a.push_back(map_a(CMatrix::unit(dim_a, i, j)));
    for (std::size_t k = 0; k < dim_b; ++k)
        for (std::size_t l = 0; l < dim_b; ++l) img_b.push_back(map_b(CMatrix::unit(dim_b, k, l)));

    CMatrix out = CMatrix::zero(x.dim());
    for (std::size_t i = 0; i < dim_a; ++i)
        for (std::size_t j = 0; j < dim_a; ++j)
            for (std::size_t k = 0; k < dim_b; ++k)
                for (std::size_t l = 0; l < dim_b; ++l) {
                    const Complex coeff = x(i * dim_b + k, j * dim_b + l);
                    if (coeff == Complex{}) continue;
                    out += coeff * kron(img_a[i * dim_a + j], img_b[k * dim_b + l]);
                }
    return out;
}

// --------------------------- master equation ---------------------------------

/// Row-major vectorised generator: vec(A X B) = (A ⊗ B^T) vec(X), so
/// dρ/dt = Gρ + ρG^† + sum LρL^† with G = -iH + K becomes
/// (G ⊗ 1 + 1 ⊗ conj(G) + sum L ⊗ conj(L)) vec(ρ).
inline CMatrix liouvillian(const LindbladModel& model) {
    const std::size_t d = model.dim();
    const CMatrix g = model.hamiltonian * (-kI) + model.damping();
    auto conj_of = [](const CMatrix& m) {
        CMatrix c = m;
        for (auto& x : c.entries()) x = std::conj(x);
        return c;
    };
    const CMatrix id = CMatrix::identity(d);
    CMatrix sup = kron(g, id) + kron(id, conj_of(g));
    for (const auto& l : model.lindblad_ops) sup += kron(l, conj_of(l));
    return sup;
}

/// Step count keeping rate·dt <= 1e-3, with the rate bounded by the
/// max-row-sum norm of the generator.
inline std::size_t default_steps(const LindbladModel& model, double t) {
    const CMatrix sup = liouvillian(model);
    double rate = 0.0;
    for (std::size_t r = 0; r < sup.dim(); ++r) {
        double row = 0.0;
        for (std::size_t c = 0; c < sup.dim(); ++c) row += std::abs(sup(r, c));
        rate = std::max(rate, row);
    }
    const double n = std::ceil(rate * std::abs(t) / 1e-3);
    return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

/// Classical fixed-step RK4 for the Lindblad master equation.  The state is
/// re-Hermitised after every step.
inline CMatrix integrate_master(const LindbladModel& model, const CMatrix& rho0, double t, std::size_t steps) {
    validate(model);
    if (steps < 1) throw std::invalid_argument("integrate_master: steps must be >= 1");
    if (rho0.dim() != model.dim()) throw std::invalid_argument("integrate_master: dimension mismatch");
    detail::require_hermitian(rho0, "integrate_master");
    if (t == 0.0) return rho0;

    const std::size_t d = model.dim(), n = d * d;
    const CMatrix sup = liouvillian(model);
    const double h = t / static_cast<double>(steps);

    CVector v = rho0.entries(), k1(n), k2(n), k3(n), k4(n), tmp(n);
    auto rhs = [&](const CVector& x, CVector& out) {
        for (std::size_t r = 0; r < n; ++r) {
            Complex s{};
            for (std::size_t c = 0; c < n; ++c) s += sup(r, c) * x[c];
            out[r] = s;
        }
    };
    for (std::size_t step = 0; step < steps; ++step) {
        rhs(v, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * h * k1[i];
        rhs(tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + 0.5 * h * k2[i];
        rhs(tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = v[i] + h * k3[i];
        rhs(tmp, k4);
        for (std::size_t i = 0; i < n; ++i) v[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
        for (std::size_t r = 0; r < d; ++r) {
            v[r * d + r] = v[r * d + r].real();
            for (std::size_t c = r + 1; c < d; ++c) {
                const Complex avg = 0.5 * (v[r * d + c] + std::conj(v[c * d + r]));
                v[r * d + c] = avg;
                v[c * d + r] = std::conj(avg);
            }
        }
    }
    CMatrix out(d);
    out.entries() = std::move(v);
    return out;
}

inline CMatrix integrate_master(const LindbladModel& model, const CMatrix& rho0, double t) {
    return integrate_master(model, rho0, t, default_steps(model, t));
}

// --------------------------- semigroup ---------------------------------------

inline const CMatrix& as_matrix(const CMatrix& m) { return m; }

/// ‖evolve(evolve(ρ, t1), t2) - evolve(ρ, t1 + t2)‖_F for any evolver whose
/// states expose a matrix through `as_matrix`.
template <typename Evolver, typename State>
double semigroup_residual(Evolver&& evolve, const State& state, double t1, double t2) {
    if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument("semigroup_residual: negative time");
    const State twice = evolve(evolve(state, t1), t2);
    const State once = evolve(state, t1 + t2);
    return frobenius_norm(as_matrix(twice) - as_matrix(once));
}

}  // namespace decaylab
