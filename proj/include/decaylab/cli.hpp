// cli.hpp: the decaylab command-line front end (evolve, bounds, figure, verify)

#pragma once

#include "decaylab/bounds.hpp"
#include "decaylab/meson.hpp"
#include "decaylab/parallel.hpp"
#include "decaylab/presets.hpp"
#include "decaylab/scalar.hpp"
#include "decaylab/units.hpp"
#include "decaylab/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace decaylab::cli {

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 1, kPhysics = 2, kVerifyFailed = 3 };

/// Bad input from the user; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A physical constraint that the requested run would break; exit code 2.
struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Settings = std::map<std::string, std::string>;

// --------------------------- value parsing -----------------------------------

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        throw UsageError("invalid number for " + key + ": '" + text + "'");
    }
    if (used != v.size()) throw UsageError("invalid number for " + key + ": '" + text + "'");
    return x;
}

/// Rates in s^-1, or in MeV with a "MeV" suffix.
inline double parse_rate(const std::string& key, const std::string& text) {
    std::string v = trim(text);
    if (v.size() > 3 && v.compare(v.size() - 3, 3, "MeV") == 0) {
        return units::mev_to_rate(parse_number(key, v.substr(0, v.size() - 3)));
    }
    return parse_number(key, v);
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
    const double x = parse_number(key, text);
    if (x < 0.0 || std::floor(x) != x) throw UsageError(key + " must be a non-negative integer");
    return static_cast<std::size_t>(x);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw UsageError("invalid boolean for " + key + ": '" + text + "'");
}

inline MesonKind parse_initial(const std::string& text) {
    static const std::map<std::string, MesonKind> kinds{
        {"K0", MesonKind::K0}, {"K0bar", MesonKind::K0bar}, {"KS", MesonKind::KS},        {"KL", MesonKind::KL},
        {"K1", MesonKind::K1}, {"K2", MesonKind::K2},       {"vacuum", MesonKind::Vacuum}};
    const auto it = kinds.find(text);
    if (it == kinds.end()) throw UsageError("unknown initial state '" + text + "'");
    return it->second;
}

inline const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "preset",  "gamma_S",     "gamma_L",       "tau_S",         "tau_L",         "delta_m", "delta_L",
        "epsilon_re", "epsilon_im", "lambda",      "lambda_factor", "gamma",         "tau",     "mass",
        "z_re",    "z_im",        "t_start",       "t_stop",        "points",        "log",     "initial",
        "out",     "lambda_measured", "lambda_err_lo", "lambda_err_hi"};
    return keys;
}

inline void set_key(Settings& s, const std::string& key, const std::string& value) {
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw UsageError("unknown key '" + key + "'");
    s[key] = value;
}

/// Flat key=value text; '#' starts a comment.
inline Settings parse_config_text(const std::string& text) {
    Settings s;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
        set_key(s, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return s;
}

inline Settings read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

// --------------------------- run configuration -------------------------------

struct TimeGrid {
    double start{0.0};
    double stop{1.0};
    std::size_t points{101};
    bool log{false};

    std::vector<double> values() const {
        std::vector<double> ts(points);
        for (std::size_t i = 0; i < points; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(points - 1);
            ts[i] = log ? start * std::pow(stop / start, f) : start + (stop - start) * f;
        }
        ts.back() = stop;
        return ts;
    }
};

struct RunConfig {
    ParticlePreset preset;
    bool custom{false};
    std::optional<MesonKind> initial;  // meson runs
    bool initial_vacuum{false};        // scalar runs
    std::optional<TimeGrid> grid;      // user-specified grid, if any
    std::optional<double> lambda_factor;
    std::string out;
};

inline void validate_grid(const TimeGrid& g) {
    if (!(g.start >= 0.0)) throw UsageError("t_start must be >= 0");
    if (!(g.stop > g.start)) throw UsageError("t_stop must be greater than t_start");
    if (g.points < 2) throw UsageError("points must be >= 2");
    if (g.log && !(g.start > 0.0)) throw UsageError("a log grid needs t_start > 0");
}

/// Preset constants overridden by the settings map.
inline RunConfig build_config(const Settings& s) {
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        const auto it = s.find(k);
        if (it == s.end()) return std::nullopt;
        return it->second;
    };

    RunConfig cfg;
    try {
        cfg.preset = preset_by_name(get("preset").value_or("K0"));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    ParticlePreset& pr = cfg.preset;

    static const std::vector<std::string> meson_keys{"gamma_S", "gamma_L", "tau_S", "tau_L", "delta_m",
                                                     "delta_L", "epsilon_re", "epsilon_im"};
    static const std::vector<std::string> scalar_keys{"gamma", "tau", "mass", "z_re", "z_im"};
    for (const auto& k : pr.is_meson() ? scalar_keys : meson_keys)
        if (get(k)) throw UsageError("key '" + k + "' does not apply to preset " + pr.name);
    for (const auto& k : pr.is_meson() ? meson_keys : scalar_keys)
        if (get(k)) cfg.custom = true;

    if (pr.is_meson()) {
        MesonParams& m = pr.meson;
        if (auto v = get("tau_S")) m.gamma_S = 1.0 / parse_number("tau_S", *v);
        if (auto v = get("tau_L")) m.gamma_L = 1.0 / parse_number("tau_L", *v);
        if (auto v = get("gamma_S")) m.gamma_S = parse_rate("gamma_S", *v);
        if (auto v = get("gamma_L")) m.gamma_L = parse_rate("gamma_L", *v);
        if (auto v = get("delta_m")) m.delta_m = parse_rate("delta_m", *v);
        const auto eps_re = get("epsilon_re"), eps_im = get("epsilon_im");
        if (eps_re || eps_im) {
            pr.epsilon.epsilon = Complex(eps_re ? parse_number("epsilon_re", *eps_re) : 0.0,
                                         eps_im ? parse_number("epsilon_im", *eps_im) : 0.0);
            if (std::abs(pr.epsilon.epsilon) >= 1.0) throw UsageError("|epsilon| must be < 1");
            const double d = delta_L_from_epsilon(pr.epsilon);
            if (auto v = get("delta_L"); v && std::abs(parse_number("delta_L", *v) - d) > 1e-12) {
                throw UsageError("delta_L inconsistent with epsilon (epsilon gives " + std::to_string(d) + ")");
            }
            m.delta_L = d;
        } else if (auto v = get("delta_L")) {
            const double d = parse_number("delta_L", *v);
            if (!(d >= 0.0 && d < 1.0)) throw UsageError("delta_L must lie in [0, 1)");
            m.delta_L = d;
            const double modulus = std::abs(pr.epsilon.epsilon);
            pr.epsilon = 0.5 * d * (1.0 + modulus * modulus) <= modulus ? epsilon_from_delta_L(d, modulus)
                                                                        : real_epsilon_from_delta_L(d);
        }
        if (auto v = get("lambda")) m.lambda = parse_rate("lambda", *v);
        try {
            check_basic(m);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    } else {
        ScalarParams& sp = pr.scalar;
        if (auto v = get("tau")) sp.gamma = 1.0 / parse_number("tau", *v);
        if (auto v = get("gamma")) sp.gamma = parse_rate("gamma", *v);
        if (auto v = get("mass")) sp.mass_freq = sp.mu = parse_rate("mass", *v);
        if (auto v = get("lambda")) sp.lambda = parse_rate("lambda", *v);
        const auto z_re = get("z_re"), z_im = get("z_im");
        if (z_re || z_im) {
            sp.z = Complex(z_re ? parse_number("z_re", *z_re) : 0.0, z_im ? parse_number("z_im", *z_im) : 0.0);
        }
        try {
            check_basic(sp);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    if (cfg.custom) pr.provenance = "custom parameters on " + pr.name + " preset";

    if (auto v = get("lambda_factor")) {
        if (!pr.is_meson()) throw UsageError("lambda_factor applies to meson presets only");
        if (get("lambda")) throw UsageError("give either lambda or lambda_factor, not both");
        const double f = parse_number("lambda_factor", *v);
        if (!(f >= 0.0)) throw UsageError("lambda_factor must be >= 0");
        cfg.lambda_factor = f;
    }

    const auto lm = get("lambda_measured");
    if (lm) {
        const double c = parse_rate("lambda_measured", *lm);
        const double lo = get("lambda_err_lo") ? parse_rate("lambda_err_lo", *get("lambda_err_lo")) : 0.0;
        const double hi = get("lambda_err_hi") ? parse_rate("lambda_err_hi", *get("lambda_err_hi")) : 0.0;
        if (lo < 0.0 || hi < 0.0) throw UsageError("lambda errors must be >= 0");
        pr.measured_lambda = MeasuredLambda{c, lo, hi};
    } else if (get("lambda_err_lo") || get("lambda_err_hi")) {
        throw UsageError("lambda_err_lo/lambda_err_hi need lambda_measured");
    } else if (cfg.custom) {
        pr.measured_lambda.reset();
    }

    if (auto v = get("initial")) {
        if (pr.is_meson()) {
            cfg.initial = parse_initial(*v);
        } else if (*v == "vacuum") {
            cfg.initial_vacuum = true;
        } else if (*v != "pi0") {
            throw UsageError("initial state for pi0 must be pi0 or vacuum");
        }
    }

    const bool any_grid = get("t_start") || get("t_stop") || get("points") || get("log");
    if (any_grid) {
        TimeGrid g;
        g.log = get("log") ? parse_bool("log", *get("log")) : false;
        g.start = get("t_start") ? parse_number("t_start", *get("t_start")) : 0.0;
        g.stop = get("t_stop") ? parse_number("t_stop", *get("t_stop")) : 10.0 * pr.tau();
        g.points = get("points") ? parse_count("points", *get("points")) : 101;
        if (g.log && !get("t_start")) g.start = 1e-3 * g.stop;
        validate_grid(g);
        cfg.grid = g;
    }
    if (auto v = get("out")) cfg.out = *v;
    return cfg;
}

// --------------------------- CSV output --------------------------------------

inline std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string fmt_short(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(const std::string& text) { os_ << "# " << text << '\n'; }

    void header(const std::vector<std::string>& cols) { row_strings(cols); }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << fmt(values[i]);
        os_ << '\n';
    }

private:
    void row_strings(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) os_ << (i ? "," : "") << cols[i];
        os_ << '\n';
    }

    std::ostream& os_;
};

/// Writes to --out when given, otherwise to the command's stdout.
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot open output file '" + path + "'");
            stream_ = &file_;
        }
    }

    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

inline void provenance(CsvWriter& csv, const std::string& command, const RunConfig& cfg) {
    csv.comment(std::string("decaylab ") + kVersion + " " + command);
    csv.comment("preset " + cfg.preset.name + ": " + cfg.preset.provenance);
    if (cfg.preset.is_meson()) {
        const auto& m = cfg.preset.meson;
        csv.comment("gamma_S=" + fmt(m.gamma_S) + " gamma_L=" + fmt(m.gamma_L) + " delta_m=" + fmt(m.delta_m) +
                    " delta_L=" + fmt(m.delta_L) + " lambda=" + fmt(m.lambda) + " epsilon=(" +
                    fmt(cfg.preset.epsilon.epsilon.real()) + "," + fmt(cfg.preset.epsilon.epsilon.imag()) + ")");
    } else {
        const auto& s = cfg.preset.scalar;
        csv.comment("gamma=" + fmt(s.gamma) + " mass_freq=" + fmt(s.mass_freq) + " lambda=" + fmt(s.lambda) +
                    " z=(" + fmt(s.z.real()) + "," + fmt(s.z.imag()) + ")");
    }
    csv.comment("times in s, rates in 1/s");
}

// --------------------------- commands ----------------------------------------

inline std::string empty_region_message() {
    return "complete positivity fails at small t even for lambda = 0 "
           "(gamma_S gamma_L / delta_L^2 - delta_m^2 < Gamma^2)";
}

inline BoundReport bounds_or_throw(const MesonParams& p) {
    const auto nb = necessary_delta_bound(p);
    if (!nb.ok) {
        throw PhysicsError("necessary condition violated: delta_L = " + fmt_short(p.delta_L) +
                           " exceeds sqrt(gamma_S gamma_L)/delta_m = " + fmt_short(nb.bound) +
                           "; no decoherence rate keeps the evolution completely positive");
    }
    BoundReport rep = lambda_max(p);
    if (rep.region_empty) throw PhysicsError(empty_region_message());
    return rep;
}

/// Resolves lambda_factor against λ_max.
inline void apply_lambda_factor(RunConfig& cfg) {
    if (!cfg.lambda_factor) return;
    const BoundReport rep = bounds_or_throw(cfg.preset.meson.with_lambda(0.0));
    if (rep.unbounded) throw UsageError("lambda_factor needs delta_L > 0 (lambda_max is unbounded)");
    cfg.preset.meson.lambda = *cfg.lambda_factor * rep.lambda_max;
}

inline int cmd_evolve(RunConfig cfg, std::ostream& out, std::ostream& err) {
    apply_lambda_factor(cfg);
    ParticlePreset& pr = cfg.preset;
    TimeGrid grid = cfg.grid.value_or(TimeGrid{0.0, 10.0 * pr.tau(), 101, false});
    const std::vector<double> ts = grid.values();

    if (pr.is_meson()) {
        const MesonParams& p = pr.meson;
        if (p.delta_L > 0.0) {
            const BoundReport rep = bounds_or_throw(p.with_lambda(0.0));
            if (p.lambda > rep.lambda_max) {
                throw PhysicsError("lambda = " + fmt_short(p.lambda) + " exceeds lambda_max = " +
                                   fmt_short(rep.lambda_max) + "; the evolution is not completely positive");
            }
        }
        const MesonKind kind = cfg.initial.value_or(MesonKind::K0);
        const TildeState rho0 = prepare_tilde(kind, pr.epsilon);
        std::vector<std::vector<double>> rows(ts.size());
        parallel_for(ts.size(), [&](std::size_t i) {
            const double t = ts[i];
            const TildeState rt = evolve_tilde(rho0, p, t);
            const CMatrix cp = to_basis(rt, pr.epsilon, Basis::CpOrthonormal).matrix;
            const auto pd = detection_probabilities(rho0, p, t);
            const double p_vac = rt.matrix(kVac, kVac).real();
            rows[i] = {t,          cp(0, 0).real(), cp(0, 1).real(),         cp(0, 1).imag(),
                       cp(1, 1).real(), cp(2, 2).real(), pd.p_K0,        pd.p_K0bar,
                       p_vac,      pd.p_K0 + pd.p_K0bar + p_vac, strangeness_expectation(rho0, p, t)};
        });
        OutputTarget target(cfg.out, out);
        CsvWriter csv(target.stream());
        provenance(csv, "evolve", cfg);
        csv.comment(std::string("initial ") + to_string(kind) + "; rho in the {K1, K2, vacuum} basis");
        csv.header({"t", "rho_K1K1", "rho_K1K2_re", "rho_K1K2_im", "rho_K2K2", "rho_00", "p_K0", "p_K0bar", "p_vac",
                    "closure", "strangeness"});
        for (const auto& r : rows) csv.row(r);
    } else {
        const ScalarParams& p = pr.scalar;
        if (p.z != Complex{}) {
            const auto zc = scalar_z_admissible(p);
            if (!zc.ok) throw PhysicsError("z not admissible: " + zc.reason);
        }
        const ScalarState rho0 = cfg.initial_vacuum ? ScalarState::vacuum() : ScalarState::pion();
        std::vector<std::vector<double>> rows(ts.size());
        parallel_for(ts.size(), [&](std::size_t i) {
            const double t = ts[i];
            const CMatrix r = evolve_scalar_general(rho0, p, t).rho;
            rows[i] = {t, r(0, 0).real(), r(0, 1).real(), r(0, 1).imag(), r(1, 1).real(), survival_probability(p.gamma, t),
                       r.trace().real()};
        });
        OutputTarget target(cfg.out, out);
        CsvWriter csv(target.stream());
        provenance(csv, "evolve", cfg);
        csv.comment(std::string("initial ") + (cfg.initial_vacuum ? "vacuum" : "pi0") + "; rho in the {pi0, vacuum} basis");
        csv.header({"t", "rho_11", "rho_12_re", "rho_12_im", "rho_22", "survival", "closure"});
        for (const auto& r : rows) csv.row(r);
    }
    (void)err;
    return kOk;
}

inline int cmd_bounds(RunConfig cfg, std::ostream& out, std::ostream& err) {
    const ParticlePreset& pr = cfg.preset;
    if (!pr.is_meson()) throw UsageError("bounds needs a meson preset (K0 or B0)");
    const MesonParams& p = pr.meson;
    const auto nb = necessary_delta_bound(p);

    out << "preset                      " << pr.name << (cfg.custom ? " (custom)" : "") << '\n';
    out << "delta_L                     " << fmt_short(p.delta_L) << '\n';
    out << "necessary bound on delta_L  " << fmt_short(nb.bound) << (nb.ok ? " (satisfied)" : " (violated)") << '\n';
    if (!nb.ok) {
        err << "decaylab: necessary condition violated: delta_L = " << fmt_short(p.delta_L)
            << " exceeds sqrt(gamma_S gamma_L)/delta_m = " << fmt_short(nb.bound)
            << "; no decoherence rate keeps the evolution completely positive\n";
        return kPhysics;
    }
    const BoundReport rep = lambda_max(p);
    if (rep.region_empty) {
        out << "lambda_max [1/s]            none\n";
        err << "decaylab: " << empty_region_message() << '\n';
        return kPhysics;
    }
    if (rep.unbounded) {
        out << "t_plus [s]                  none\n";
        out << "lambda_max [1/s]            unbounded\n";
    } else {
        out << "t_plus [s]                  " << fmt_short(rep.t_plus) << '\n';
        out << "lambda_max [1/s]            " << fmt_short(rep.lambda_max) << '\n';
        out << "lambda_max first order      " << fmt_short(rep.lambda_max_first_order) << '\n';
    }
    if (pr.measured_lambda) {
        const auto& m = *pr.measured_lambda;
        const bool inside = experimental_lambda_check(rep.lambda_max, m.value, m.err_lo, m.err_hi);
        out << "measured lambda [1/s]       " << fmt_short(m.value) << " (-" << fmt_short(m.err_lo) << " +"
            << fmt_short(m.err_hi) << "): " << (inside ? "inside" : "outside") << " [0, lambda_max]\n";
    }
    if (!cfg.out.empty() && !rep.unbounded) {
        OutputTarget target(cfg.out, out);
        CsvWriter csv(target.stream());
        provenance(csv, "bounds", cfg);
        csv.comment("t_plus=" + fmt(rep.t_plus) + " lambda_max=" + fmt(rep.lambda_max));
        csv.header({"t", "lambda_lower", "lambda_upper"});
        for (const auto& s : rep.grid) csv.row({s.t, s.lower, s.upper});
    }
    return kOk;
}

inline int cmd_figure(RunConfig cfg, const std::string& which, std::ostream& out, std::ostream& err) {
    const ParticlePreset& pr = cfg.preset;
    if (!pr.is_meson()) throw UsageError("figure needs a meson preset (K0 or B0)");
    if (which != "fig1" && which != "fig2") throw UsageError("figure must be fig1 or fig2");
    const MesonParams& p = pr.meson;
    const BoundReport rep = bounds_or_throw(p);
    if (rep.unbounded) throw UsageError("figure needs delta_L > 0");

    TimeGrid grid = cfg.grid.value_or(TimeGrid{1e-3 * rep.t_plus, 1e3 * rep.t_plus, 1000, true});
    const std::vector<double> ts = grid.values();
    std::vector<std::vector<double>> rows(ts.size());
    if (which == "fig1") {
        parallel_for(ts.size(), [&](std::size_t i) {
            const double d = discriminant(p, ts[i]);
            rows[i] = {ts[i], d, p.delta_L * p.delta_L * d};
        });
    } else {
        if (ts.front() <= 0.0) throw UsageError("fig2 needs t_start > 0");
        parallel_for(ts.size(), [&](std::size_t i) {
            const auto lb = lambda_bounds_at(p, ts[i]);
            rows[i] = {ts[i], lb.lower, lb.upper, rep.lambda_max};
        });
    }
    OutputTarget target(cfg.out, out);
    CsvWriter csv(target.stream());
    provenance(csv, "figure " + which, cfg);
    csv.comment("t_plus=" + fmt(rep.t_plus) + " lambda_max=" + fmt(rep.lambda_max));
    if (which == "fig1") {
        csv.comment("discriminant = (1-exp(-t gamma_S))(1-exp(-t gamma_L)) - delta_L^2 sin^2(t delta_m)");
        csv.header({"t", "discriminant", "discriminant_delta_scaled"});
    } else {
        csv.header({"t", "lambda_lower", "lambda_upper", "lambda_max"});
    }
    for (const auto& r : rows) csv.row(r);
    (void)err;
    return kOk;
}

inline void write_verify_line(std::ostream& out, const SuiteResult& r) {
    out << r.preset << ',' << r.suite << ',' << fmt(r.max_residual) << ',' << fmt(r.tolerance) << ','
        << (r.passed ? "PASS" : "FAIL") << ',' << (r.witness_t ? fmt(*r.witness_t) : "");
    if (!r.note.empty()) out << ",\"" << r.note << '"';
    out << '\n';
}

inline int cmd_verify(const std::vector<RunConfig>& configs, std::ostream& out, std::ostream& err) {
    out << "preset,suite,max_residual,tolerance,status,witness_t\n";
    bool all_ok = true;
    for (RunConfig cfg : configs) {
        apply_lambda_factor(cfg);
        for (const auto& r : verify_preset(cfg.preset)) {
            write_verify_line(out, r);
            all_ok = all_ok && r.passed;
        }
    }
    if (!all_ok) {
        err << "decaylab: verification failed\n";
        return kVerifyFailed;
    }
    return kOk;
}

// --------------------------- entry point -------------------------------------

struct CommonFlags {
    std::string preset;
    std::string config;
    std::string t_start, t_stop, points;
    bool log{false};
    std::string lambda, lambda_factor;
    std::string initial;
    std::string out;
    std::vector<std::string> sets;
};

inline void add_common(CLI::App* sub, CommonFlags& f, bool with_grid, bool with_initial) {
    sub->add_option("--preset", f.preset, "Particle preset: K0, B0 or pi0");
    sub->add_option("--config", f.config, "key=value configuration file");
    if (with_grid) {
        sub->add_option("--t-start", f.t_start, "First time [s]");
        sub->add_option("--t-stop", f.t_stop, "Last time [s]");
        sub->add_option("--points", f.points, "Number of grid points (>= 2)");
        sub->add_flag("--log", f.log, "Logarithmic time grid");
    }
    sub->add_option("--lambda", f.lambda, "Decoherence rate [1/s], or with a MeV suffix");
    sub->add_option("--lambda-factor", f.lambda_factor, "Decoherence rate as a multiple of lambda_max");
    if (with_initial) sub->add_option("--initial", f.initial, "Initial state: K0 K0bar KS KL K1 K2 vacuum (pi0: pi0 vacuum)");
    sub->add_option("--out", f.out, "Output file (default stdout)");
    sub->add_option("--set", f.sets, "Parameter override key=value (repeatable)");
}

/// Config file first, then explicit flags, then --set overrides.
inline Settings merge_settings(const CommonFlags& f) {
    Settings s;
    if (!f.config.empty()) s = read_config_file(f.config);
    auto put = [&](const char* key, const std::string& v) {
        if (!v.empty()) s[key] = v;
    };
    put("preset", f.preset);
    put("t_start", f.t_start);
    put("t_stop", f.t_stop);
    put("points", f.points);
    if (f.log) s["log"] = "true";
    put("lambda", f.lambda);
    put("lambda_factor", f.lambda_factor);
    put("initial", f.initial);
    put("out", f.out);
    for (const auto& kv : f.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
        set_key(s, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
    }
    return s;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Completely positive decay dynamics of neutral pions, kaons and B mesons", "decaylab"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1, 1);

    CommonFlags f;
    std::string which;
    auto* evolve = app.add_subcommand("evolve", "Evolve a state and write a CSV trajectory");
    add_common(evolve, f, true, true);
    auto* bounds = app.add_subcommand("bounds", "Print t_plus, lambda_max and the experimental comparison");
    add_common(bounds, f, false, false);
    auto* figure = app.add_subcommand("figure", "Write the discriminant (fig1) or lambda bounds (fig2) as CSV");
    figure->add_option("which", which, "fig1 or fig2")->required();
    add_common(figure, f, true, false);
    auto* verify = app.add_subcommand("verify", "Run the invariant suites; exit 3 on failure");
    add_common(verify, f, false, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "decaylab: " << e.what() << '\n'
            << "usage: decaylab evolve|bounds|figure|verify [options] (see --help)\n";
        return kUsage;
    }

    try {
        const Settings s = merge_settings(f);
        if (evolve->parsed()) return cmd_evolve(build_config(s), out, err);
        if (bounds->parsed()) return cmd_bounds(build_config(s), out, err);
        if (figure->parsed()) return cmd_figure(build_config(s), which, out, err);
        if (verify->parsed()) {
            std::vector<RunConfig> configs;
            if (s.count("preset")) {
                configs.push_back(build_config(s));
            } else {
                for (const auto& name : preset_names()) {
                    Settings one = s;
                    one["preset"] = name;
                    if (name == "pi0") one.erase("lambda_factor");
                    configs.push_back(build_config(one));
                }
            }
            return cmd_verify(configs, out, err);
        }
    } catch (const UsageError& e) {
        err << "decaylab: " << e.what() << '\n';
        return kUsage;
    } catch (const PhysicsError& e) {
        err << "decaylab: " << e.what() << '\n';
        return kPhysics;
    } catch (const std::domain_error& e) {
        err << "decaylab: " << e.what() << '\n';
        return kPhysics;
    } catch (const std::exception& e) {
        err << "decaylab: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace decaylab::cli
