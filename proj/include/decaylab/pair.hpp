// pair.hpp: two noninteracting mesons evolved by the product channel

#pragma once

#include "decaylab/dynamics.hpp"
#include "decaylab/meson.hpp"

#include <stdexcept>

namespace decaylab {

/// Product Kraus set {E_i ⊗ F_j} on the 9-dimensional CP-orthonormal space.
inline KrausSet pair_kraus(const MesonParams& pa, const CpViolation& ea, const MesonParams& pb,
                           const CpViolation& eb, double t) {
    const KrausSet a = kraus_orthonormal(pa, ea, t);
    const KrausSet b = kraus_orthonormal(pb, eb, t);
    KrausSet ks{{}, CMatrix::identity(9), Basis::CpOrthonormal};
    ks.operators.reserve(a.operators.size() * b.operators.size());
    for (const auto& ka : a.operators)
        for (const auto& kb : b.operators) ks.operators.push_back(kron(ka, kb));
    return ks;
}

inline CMatrix tensor_evolve_pair(const CMatrix& state12, const MesonParams& pa, const MesonParams& pb,
                                  const CpViolation& ea, const CpViolation& eb, double t) {
    if (state12.dim() != 9) throw std::invalid_argument("tensor_evolve_pair: expected a 9x9 state");
    detail::require_hermitian(state12, "tensor_evolve_pair");
    return apply_kraus(state12, pair_kraus(pa, ea, pb, eb, t));
}

/// Orthonormal single-particle evolution V·ρ~(t)·V^† of a CP-basis state.
inline CMatrix evolve_meson_cp(const CMatrix& rho_cp, const MesonParams& p, const CpViolation& e, double t) {
    detail::require_consistent(p, e, "evolve_meson_cp");
    const TildeState tilde = to_basis(MesonState{rho_cp, Basis::CpOrthonormal}, e, Basis::SlTilde);
    return to_basis(evolve_tilde(tilde, p, t), e, Basis::CpOrthonormal).matrix;
}

}  // namespace decaylab
