// units.hpp: MeV <-> s^-1 conversion

#pragma once

namespace decaylab::units {

/// Reduced Planck constant in MeV·s (CODATA 2002).
inline constexpr double kHbarMeVs = 6.58211915e-22;

/// Energy (MeV) to angular frequency / rate (s^-1).
constexpr double mev_to_rate(double mev) { return mev / kHbarMeVs; }

constexpr double rate_to_mev(double rate) { return rate * kHbarMeVs; }

}  // namespace decaylab::units
