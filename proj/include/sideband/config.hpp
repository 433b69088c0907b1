#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "sideband/dynamics.hpp"
#include "sideband/model.hpp"

namespace sideband {

enum class ScenarioKind { fig1, fig2, detuning, leakage, bloch_siegert, custom };

inline const char* to_string(ScenarioKind s) {
    switch (s) {
        case ScenarioKind::fig1: return "fig1";
        case ScenarioKind::fig2: return "fig2";
        case ScenarioKind::detuning: return "detuning";
        case ScenarioKind::leakage: return "leakage";
        case ScenarioKind::bloch_siegert: return "bloch_siegert";
        case ScenarioKind::custom: return "custom";
    }
    return "?";
}

/// Fully resolved run configuration. Defaults are the resonant Bell-resource
/// operating point (omega = omega0 = 1, g = pi/4, T = 10, window n0 +/- 10).
struct RunConfig {
    ScenarioKind scenario = ScenarioKind::fig1;
    ProtocolParams physics;
    Generator generator = Generator::Rwa;
    std::string output_dir = "out";
    int samples = 400;
    std::uint64_t seed = 12345;
    int window_halfwidth = 10;

    int fig2_alpha_count = 21;
    int fig2_phi_count = 4;
    double detuning_span_g0 = 10.0;
    int detuning_count = 21;
    double leakage_t_min = 10.0;
    double leakage_t_max = 100.0;
    int leakage_count = 7;
    double bloch_siegert_span_g0 = 0.5;
    int bloch_siegert_count = 21;

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, int line) {
    double out = 0.0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    const auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc{} || p != e)
        throw ParseError("line " + std::to_string(line) + ": expected a number, got '" + v +
                         "'");
    return out;
}

inline long parse_int(const std::string& v, int line) {
    long out = 0;
    const char* b = v.data();
    const char* e = v.data() + v.size();
    const auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc{} || p != e)
        throw ParseError("line " + std::to_string(line) + ": expected an integer, got '" + v +
                         "'");
    return out;
}

inline PulseShape parse_shape(const std::string& v, int line) {
    if (v == "square") return PulseShape::Square;
    if (v == "raised_cosine") return PulseShape::RaisedCosine;
    if (v == "gaussian") return PulseShape::Gaussian;
    throw ParseError("line " + std::to_string(line) +
                     ": envelope shape must be square|raised_cosine|gaussian");
}

inline const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "scenario", "omega", "omega0", "alpha", "phi",
        "envelope.shape", "envelope.area", "envelope.duration", "envelope.sigma_fraction",
        "envelope_b.shape", "envelope_b.area", "envelope_b.duration",
        "envelope_b.sigma_fraction",
        "window.n0", "window.halfwidth", "integrator.step_fraction", "generator",
        "samples", "output_dir", "seed",
        "fig2.alpha_count", "fig2.phi_count",
        "detuning.span_g0", "detuning.count",
        "leakage.t_min", "leakage.t_max", "leakage.count",
        "bloch_siegert.span_g0", "bloch_siegert.count"};
    return keys;
}

}  // namespace detail

/// Parse the flat `key = value` config format ('#' comments, dotted keys).
/// Unknown keys and violated invariants are rejected.
inline RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> kv;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string line = nl == std::string::npos ? text.substr(pos)
                                                   : text.substr(pos, nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty key or value");
        if (kv.count(key))
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + key +
                             "'");
        kv[key] = {value, line_no};
    }

    for (const auto& [key, vl] : kv) {
        bool known = false;
        for (const std::string& k : detail::known_keys())
            if (k == key) known = true;
        if (!known) throw ValidationError("unknown key '" + key + "'");
    }

    RunConfig cfg;
    auto has = [&](const char* k) { return kv.count(k) != 0; };
    auto str = [&](const char* k) { return kv.at(k).first; };
    auto lineof = [&](const char* k) { return kv.at(k).second; };
    auto dbl = [&](const char* k, double defv) {
        return has(k) ? detail::parse_double(str(k), lineof(k)) : defv;
    };
    auto integer = [&](const char* k, long defv) {
        return has(k) ? detail::parse_int(str(k), lineof(k)) : defv;
    };

    if (has("scenario")) {
        const std::string v = str("scenario");
        if (v == "fig1") cfg.scenario = ScenarioKind::fig1;
        else if (v == "fig2") cfg.scenario = ScenarioKind::fig2;
        else if (v == "detuning") cfg.scenario = ScenarioKind::detuning;
        else if (v == "leakage") cfg.scenario = ScenarioKind::leakage;
        else if (v == "bloch_siegert") cfg.scenario = ScenarioKind::bloch_siegert;
        else if (v == "custom") cfg.scenario = ScenarioKind::custom;
        else
            throw ParseError("line " + std::to_string(lineof("scenario")) +
                             ": unknown scenario '" + v + "'");
    }
    if (has("generator")) {
        const std::string v = str("generator");
        if (v == "rwa") cfg.generator = Generator::Rwa;
        else if (v == "full") cfg.generator = Generator::Full;
        else
            throw ParseError("line " + std::to_string(lineof("generator")) +
                             ": generator must be rwa|full");
    }

    ProtocolParams& p = cfg.physics;
    p.omega = dbl("omega", 1.0);
    p.omega0 = dbl("omega0", 1.0);
    p.alpha = dbl("alpha", std::numbers::sqrt2 / 2.0);
    p.phi = dbl("phi", 0.0);

    PulseEnvelope env;
    if (has("envelope.shape")) env.shape = detail::parse_shape(str("envelope.shape"),
                                                               lineof("envelope.shape"));
    env.area = dbl("envelope.area", std::numbers::pi / 4.0);
    env.duration = dbl("envelope.duration", 10.0);
    env.sigma_fraction = dbl("envelope.sigma_fraction", 0.15);
    p.envelope_a = env;
    p.envelope_b = env;
    if (has("envelope_b.shape"))
        p.envelope_b.shape =
            detail::parse_shape(str("envelope_b.shape"), lineof("envelope_b.shape"));
    p.envelope_b.area = dbl("envelope_b.area", p.envelope_b.area);
    p.envelope_b.duration = dbl("envelope_b.duration", p.envelope_b.duration);
    p.envelope_b.sigma_fraction = dbl("envelope_b.sigma_fraction", p.envelope_b.sigma_fraction);

    const long n0 = integer("window.n0", 0);
    const long halfwidth = integer("window.halfwidth", 10);
    if (halfwidth < 2) throw ValidationError("window.halfwidth must be >= 2");
    cfg.window_halfwidth = static_cast<int>(halfwidth);
    p.window = SidebandWindow{static_cast<int>(n0 - halfwidth),
                              static_cast<int>(n0 + halfwidth), static_cast<int>(n0)};
    p.integrator.step_fraction = dbl("integrator.step_fraction", 0.02);

    const long samples = integer("samples", 400);
    if (samples < 2) throw ValidationError("samples must be >= 2");
    cfg.samples = static_cast<int>(samples);
    if (has("output_dir")) cfg.output_dir = str("output_dir");
    const long seed = integer("seed", 12345);
    if (seed < 0) throw ValidationError("seed must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(seed);

    cfg.fig2_alpha_count = static_cast<int>(integer("fig2.alpha_count", 21));
    cfg.fig2_phi_count = static_cast<int>(integer("fig2.phi_count", 4));
    if (cfg.fig2_alpha_count < 2 || cfg.fig2_phi_count < 1)
        throw ValidationError("fig2 grid counts must be >= 2 alphas and >= 1 phi");
    cfg.detuning_span_g0 = dbl("detuning.span_g0", 10.0);
    cfg.detuning_count = static_cast<int>(integer("detuning.count", 21));
    if (!(cfg.detuning_span_g0 > 0.0)) throw ValidationError("detuning.span_g0 must be > 0");
    if (cfg.detuning_count < 3 || cfg.detuning_count % 2 == 0)
        throw ValidationError("detuning.count must be an odd integer >= 3");
    cfg.leakage_t_min = dbl("leakage.t_min", 10.0);
    cfg.leakage_t_max = dbl("leakage.t_max", 100.0);
    cfg.leakage_count = static_cast<int>(integer("leakage.count", 7));
    if (!(cfg.leakage_t_min > 0.0) || cfg.leakage_t_max <= cfg.leakage_t_min)
        throw ValidationError("leakage grid needs 0 < t_min < t_max");
    if (cfg.leakage_count < 2) throw ValidationError("leakage.count must be >= 2");
    cfg.bloch_siegert_span_g0 = dbl("bloch_siegert.span_g0", 0.5);
    cfg.bloch_siegert_count = static_cast<int>(integer("bloch_siegert.count", 21));
    if (!(cfg.bloch_siegert_span_g0 > 0.0))
        throw ValidationError("bloch_siegert.span_g0 must be > 0");
    if (cfg.bloch_siegert_count < 3)
        throw ValidationError("bloch_siegert.count must be >= 3");

    p.validate();  // throws ValidationError naming the violated invariant
    return cfg;
}

/// Shortest round-trip decimal representation.
inline std::string format_double(double v) {
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

/// Canonical `key = value` lines reproducing this config exactly on reparse.
inline std::string echo_config(const RunConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["scenario"] = to_string(cfg.scenario);
    kv["omega"] = format_double(cfg.physics.omega);
    kv["omega0"] = format_double(cfg.physics.omega0);
    kv["alpha"] = format_double(cfg.physics.alpha);
    kv["phi"] = format_double(cfg.physics.phi);
    kv["envelope.shape"] = to_string(cfg.physics.envelope_a.shape);
    kv["envelope.area"] = format_double(cfg.physics.envelope_a.area);
    kv["envelope.duration"] = format_double(cfg.physics.envelope_a.duration);
    kv["envelope.sigma_fraction"] = format_double(cfg.physics.envelope_a.sigma_fraction);
    kv["envelope_b.shape"] = to_string(cfg.physics.envelope_b.shape);
    kv["envelope_b.area"] = format_double(cfg.physics.envelope_b.area);
    kv["envelope_b.duration"] = format_double(cfg.physics.envelope_b.duration);
    kv["envelope_b.sigma_fraction"] = format_double(cfg.physics.envelope_b.sigma_fraction);
    kv["window.n0"] = std::to_string(cfg.physics.window.n0);
    kv["window.halfwidth"] = std::to_string(cfg.window_halfwidth);
    kv["integrator.step_fraction"] = format_double(cfg.physics.integrator.step_fraction);
    kv["generator"] = to_string(cfg.generator);
    kv["samples"] = std::to_string(cfg.samples);
    kv["output_dir"] = cfg.output_dir;
    kv["seed"] = std::to_string(cfg.seed);
    kv["fig2.alpha_count"] = std::to_string(cfg.fig2_alpha_count);
    kv["fig2.phi_count"] = std::to_string(cfg.fig2_phi_count);
    kv["detuning.span_g0"] = format_double(cfg.detuning_span_g0);
    kv["detuning.count"] = std::to_string(cfg.detuning_count);
    kv["leakage.t_min"] = format_double(cfg.leakage_t_min);
    kv["leakage.t_max"] = format_double(cfg.leakage_t_max);
    kv["leakage.count"] = std::to_string(cfg.leakage_count);
    kv["bloch_siegert.span_g0"] = format_double(cfg.bloch_siegert_span_g0);
    kv["bloch_siegert.count"] = std::to_string(cfg.bloch_siegert_count);
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

/// Grid builders shared by the CLI and the test suites.
inline std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

inline std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) v[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

inline std::vector<double> fig2_alpha_grid(const RunConfig& cfg) {
    return linspace(0.0, 1.0, cfg.fig2_alpha_count);
}

inline std::vector<double> fig2_phi_grid(const RunConfig& cfg) {
    std::vector<double> v(cfg.fig2_phi_count);
    for (int i = 0; i < cfg.fig2_phi_count; ++i)
        v[i] = 2.0 * std::numbers::pi * i / cfg.fig2_phi_count;
    return v;
}

inline std::vector<double> detuning_grid(const RunConfig& cfg) {
    const double g0 = cfg.physics.envelope_a.peak();
    auto grid = linspace(-cfg.detuning_span_g0 * g0, cfg.detuning_span_g0 * g0,
                         cfg.detuning_count);
    grid[cfg.detuning_count / 2] = 0.0;  // exact center
    return grid;
}

inline std::vector<double> leakage_grid(const RunConfig& cfg) {
    return logspace(cfg.leakage_t_min, cfg.leakage_t_max, cfg.leakage_count);
}

inline std::vector<double> bloch_siegert_grid(const RunConfig& cfg) {
    const double g0 = cfg.physics.envelope_a.peak();
    return linspace(-cfg.bloch_siegert_span_g0 * g0, cfg.bloch_siegert_span_g0 * g0,
                    cfg.bloch_siegert_count);
}

}  // namespace sideband
