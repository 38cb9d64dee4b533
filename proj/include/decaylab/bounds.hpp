// bounds.hpp: complete-positivity constraints on the meson decoherence rate λ

#pragma once

#include "decaylab/meson.hpp"
#include "decaylab/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace decaylab {

struct CpInequality {
    double lhs;
    double rhs;
    bool ok;
};

/// δ_L² |1 - e^{-t(Γ+λ-iΔm)}|² <= (1 - e^{-tΓ_S})(1 - e^{-tΓ_L})
inline CpInequality cp_inequality(const MesonParams& p, double t) {
    detail::require_time(t, "cp_inequality");
    const Complex w(t * (p.gamma() + p.lambda), -t * p.delta_m);
    const double lhs = p.delta_L * p.delta_L * std::norm(detail::one_minus_exp(w));
    const double rhs = std::expm1(-t * p.gamma_S) * std::expm1(-t * p.gamma_L);
    return {lhs, rhs, lhs <= rhs + 1e-15};
}

/// (1 - e^{-tΓ_S})(1 - e^{-tΓ_L}) - δ_L² sin²(tΔm); this is Δ/δ_L² in the
/// notation where the quadratic in e^{-t(Γ+λ)} is normalised by δ_L².
inline double discriminant(const MesonParams& p, double t) {
    detail::require_time(t, "discriminant");
    const double s = std::sin(t * p.delta_m);
    return std::expm1(-t * p.gamma_S) * std::expm1(-t * p.gamma_L) - p.delta_L * p.delta_L * s * s;
}

struct NecessaryBound {
    double bound;
    bool ok;
};

/// δ_L <= sqrt(Γ_S Γ_L)/Δm
inline NecessaryBound necessary_delta_bound(const MesonParams& p) {
    if (p.delta_m == 0.0) return {std::numeric_limits<double>::infinity(), true};
    const double b = std::sqrt(p.gamma_S * p.gamma_L) / p.delta_m;
    return {b, p.delta_L <= b};
}

namespace detail {

/// cos(tΔm) - sqrt(Δ)/δ_L: the smaller root of the quadratic in e^{-t(Γ+λ)}.
inline double lower_root(const MesonParams& p, double t) {
    return std::cos(t * p.delta_m) - std::sqrt(std::max(0.0, discriminant(p, t))) / p.delta_L;
}

inline double upper_root(const MesonParams& p, double t) {
    return std::cos(t * p.delta_m) + std::sqrt(std::max(0.0, discriminant(p, t))) / p.delta_L;
}

/// sqrt(Γ_S Γ_L/δ_L² - Δm²): the t -> 0 slope of sqrt(Δ)/δ_L.
inline double kappa(const MesonParams& p) {
    return std::sqrt(p.gamma_S * p.gamma_L / (p.delta_L * p.delta_L) - p.delta_m * p.delta_m);
}

inline void require_bounded(const MesonParams& p, const char* who) {
    check_basic(p);
    if (!necessary_delta_bound(p).ok) throw std::domain_error(std::string(who) + ": necessary delta_L condition violated");
    if (p.delta_L == 0.0) throw std::domain_error(std::string(who) + ": delta_L = 0 leaves lambda unbounded");
}

}  // namespace detail

/// Smallest t > 0 where the upper λ bound stops being active.
inline double t_plus(const MesonParams& p) {
    detail::require_bounded(p, "t_plus");
    if (p.delta_m == 0.0) throw std::domain_error("t_plus: no t_plus: left bound never active");
    const double limit = 2.0 * std::numbers::pi / p.delta_m;
    double lo = 1e-6 / p.delta_m;
    if (detail::lower_root(p, lo) <= 0.0) throw std::domain_error("t_plus: no t_plus: left bound never active");
    double hi = 2.0 * lo;
    while (detail::lower_root(p, hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (lo > limit) throw std::domain_error("t_plus: no t_plus: left bound never active");
    }
    hi = std::min(hi, limit);
    if (detail::lower_root(p, hi) > 0.0) throw std::domain_error("t_plus: no t_plus: left bound never active");
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (detail::lower_root(p, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct LambdaBounds {
    double lower;
    double upper;  // +inf where the bound is inactive
};

inline LambdaBounds lambda_bounds_at(const MesonParams& p, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("lambda_bounds_at: t must be > 0");
    check_basic(p);
    const double inf = std::numeric_limits<double>::infinity();
    if (p.delta_L == 0.0) return {-inf, inf};
    const double g = p.gamma();
    const double up_arg = detail::upper_root(p, t);
    const double lo_arg = detail::lower_root(p, t);
    const double lower = -std::log(up_arg) / t - g;
    const double upper = lo_arg > 0.0 ? -std::log(lo_arg) / t - g : inf;
    return {lower, upper};
}

struct BoundSample {
    double t;
    double lower;
    double upper;
};

struct BoundReport {
    double t_plus{0.0};
    double lambda_max{0.0};
    double lambda_max_first_order{0.0};
    bool necessary_ok{true};
    double necessary_margin{0.0};
    bool unbounded{false};
    bool region_empty{false};  // the infimum is negative: even λ = 0 is not CP
    std::vector<BoundSample> grid;
};

namespace detail {

/// Upper bound with a first-order series below 1e-6·t₊, where the direct
/// form loses all digits to 0/0.
inline double upper_bound_stable(const MesonParams& p, double t, double tp) {
    if (t < 1e-6 * tp) {
        const double k = kappa(p), g = p.gamma();
        const double slope = p.gamma_S * p.gamma_L / (2.0 * p.delta_L * p.delta_L) * (1.0 - g / k);
        return k - g + t * slope;
    }
    return lambda_bounds_at(p, t).upper;
}

}  // namespace detail

inline double lambda_max_first_order(const MesonParams& p) {
    return std::sqrt(p.gamma_S * p.gamma_L - p.delta_L * p.delta_L * p.delta_m * p.delta_m) / p.delta_L - p.gamma();
}

/// Infimum over (0, t₊] of the upper λ bound: log-grid scan then golden
/// section on the bracket around the best sample.
inline BoundReport lambda_max(const MesonParams& p, std::size_t grid_points = 2048) {
    check_basic(p);
    BoundReport rep;
    const auto nb = necessary_delta_bound(p);
    rep.necessary_ok = nb.ok;
    rep.necessary_margin = nb.bound - p.delta_L;
    if (p.delta_L == 0.0) {
        rep.unbounded = true;
        rep.t_plus = std::numeric_limits<double>::infinity();
        rep.lambda_max = rep.lambda_max_first_order = std::numeric_limits<double>::infinity();
        return rep;
    }
    if (!nb.ok) throw std::domain_error("lambda_max: necessary delta_L condition violated");
    if (grid_points < 3) throw std::invalid_argument("lambda_max: grid_points must be >= 3");

    const double tp = t_plus(p);
    rep.t_plus = tp;
    rep.lambda_max_first_order = lambda_max_first_order(p);

    const double t_lo = 1e-9 * tp;
    const double ratio = std::log(tp / t_lo);
    rep.grid.resize(grid_points);
    parallel_for(grid_points, [&](std::size_t i) {
        const double t = t_lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(grid_points - 1));
        const double tt = i + 1 == grid_points ? tp : t;
        const auto lb = lambda_bounds_at(p, tt);
        rep.grid[i] = {tt, lb.lower, detail::upper_bound_stable(p, tt, tp)};
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < grid_points; ++i)
        if (rep.grid[i].upper < rep.grid[best].upper) best = i;

    double value = rep.grid[best].upper;
    if (best > 0 && best + 1 < grid_points) {
        double a = rep.grid[best - 1].t, b = rep.grid[best + 1].t;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        auto f = [&](double t) { return detail::upper_bound_stable(p, t, tp); };
        double c = b - phi * (b - a), d = a + phi * (b - a);
        double fc = f(c), fd = f(d);
        while (b - a > 1e-7 * b) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = f(d);
            }
        }
        value = std::min(value, std::min(fc, fd));
    }
    // t -> 0+ limit of the bound
    value = std::min(value, detail::kappa(p) - p.gamma());
    rep.region_empty = value < 0.0;
    rep.lambda_max = std::max(0.0, value);
    return rep;
}

/// Whether [λ - err_lo, λ + err_hi] meets the allowed range [0, λ_max].
inline bool experimental_lambda_check(double lambda_max_value, double lambda_measured, double err_lo, double err_hi) {
    if (err_lo < 0.0 || err_hi < 0.0) throw std::invalid_argument("experimental_lambda_check: errors must be >= 0");
    const double lo = lambda_measured - err_lo, hi = lambda_measured + err_hi;
    return hi >= 0.0 && lo <= lambda_max_value;
}

inline bool experimental_lambda_check(const MesonParams& p, double lambda_measured, double err_lo, double err_hi) {
    return experimental_lambda_check(lambda_max(p).lambda_max, lambda_measured, err_lo, err_hi);
}

}  // namespace decaylab
