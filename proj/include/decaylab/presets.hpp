// presets.hpp: built-in particle constants

#pragma once

#include "decaylab/meson.hpp"
#include "decaylab/scalar.hpp"
#include "decaylab/units.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace decaylab {

struct MeasuredLambda {
    double value;   // s^-1
    double err_lo;  // s^-1, >= 0
    double err_hi;  // s^-1, >= 0
};

struct ParticlePreset {
    enum class Kind { Meson, Scalar };

    std::string name;
    Kind kind{Kind::Meson};
    MesonParams meson{};
    CpViolation epsilon{};
    ScalarParams scalar{};
    double mass_mev{0.0};
    std::optional<MeasuredLambda> measured_lambda;
    std::string provenance;

    bool is_meson() const { return kind == Kind::Meson; }

    /// Shortest relevant lifetime, used for default time grids.
    double tau() const { return is_meson() ? 1.0 / meson.gamma_S : 1.0 / scalar.gamma; }
};

/// Mean mass is kept out of the dynamics (mean_mass_freq = 0): it only
/// rotates the vacuum coherences, which physical states never populate, and
/// m·t ~ 1e14 rad would swamp double precision in the phases.
inline ParticlePreset preset_K0() {
    ParticlePreset p;
    p.name = "K0";
    p.kind = ParticlePreset::Kind::Meson;
    p.meson.delta_m = 0.5292e10;
    p.meson.gamma_S = 1.0 / 0.8953e-10;
    p.meson.gamma_L = 1.0 / 5.18e-8;
    p.meson.delta_L = 3.27e-3;
    p.meson.lambda = 0.0;
    p.meson.mean_mass_freq = 0.0;
    p.epsilon = epsilon_from_delta_L(p.meson.delta_L, 2.228e-3);
    p.mass_mev = 497.648;
    p.measured_lambda = MeasuredLambda{2.80e9, 3.30e9, 3.80e9};
    p.provenance = "neutral kaon, PDG constants";
    return p;
}

inline ParticlePreset preset_B0() {
    ParticlePreset p;
    p.name = "B0";
    p.kind = ParticlePreset::Kind::Meson;
    p.meson.delta_m = 0.502e12;
    p.meson.gamma_S = 1.0 / 1.536e-12;
    p.meson.gamma_L = 1.0 / 1.536e-12;
    p.meson.delta_L = 2.0 * 0.5e-3;
    p.meson.lambda = 0.0;
    p.meson.mean_mass_freq = 0.0;
    p.epsilon = real_epsilon_from_delta_L(p.meson.delta_L);
    p.mass_mev = 5279.4;
    p.measured_lambda = MeasuredLambda{-0.71e11, 1.15e11, 1.15e11};
    p.provenance = "neutral B meson, PDG constants";
    return p;
}

inline ParticlePreset preset_pi0() {
    ParticlePreset p;
    p.name = "pi0";
    p.kind = ParticlePreset::Kind::Scalar;
    p.scalar = ScalarParams::make(1.0 / 8.43e-17, 0.0);
    p.mass_mev = 134.9768;
    p.provenance = "neutral pion, PDG lifetime and mass";
    return p;
}

inline std::vector<std::string> preset_names() { return {"K0", "B0", "pi0"}; }

inline ParticlePreset preset_by_name(const std::string& name) {
    if (name == "K0") return preset_K0();
    if (name == "B0") return preset_B0();
    if (name == "pi0") return preset_pi0();
    throw std::invalid_argument("unknown preset '" + name + "' (expected K0, B0 or pi0)");
}

}  // namespace decaylab
