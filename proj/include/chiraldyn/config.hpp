// config.hpp — Flat "section.key = value" scenario configuration
//
// Exactly one bath parameterization may be present: a direct (J0, Lambda)
// pair under bath.*, a microscopic gas block under gas.*, a Debye solvent
// block under debye.*, or a tabulated file.  Parsing collects every
// violation instead of stopping at the first.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chiraldyn/discrete_bath.hpp"
#include "chiraldyn/dynamics.hpp"
#include "chiraldyn/molecule.hpp"
#include "chiraldyn/spectral.hpp"
#include "chiraldyn/units.hpp"

namespace chiraldyn {

enum class EvalPath { general, dilute_closed_form, isolated, oracle };

struct TimeGrid {
    double t_min{0.0};
    double t_max{1.0};
    int points{1000};
    bool log_scale{false};

    std::vector<double> times() const {
        std::vector<double> t(static_cast<std::size_t>(points));
        if (log_scale) {
            const double lo = std::max(t_min, 1e-12 * t_max);
            for (int i = 0; i < points; ++i)
                t[static_cast<std::size_t>(i)] =
                    lo * std::pow(t_max / lo, static_cast<double>(i) / (points - 1));
            if (t_min == 0.0) t[0] = 0.0;
        } else {
            for (int i = 0; i < points; ++i)
                t[static_cast<std::size_t>(i)] =
                    t_min + (t_max - t_min) * static_cast<double>(i) / (points - 1);
        }
        return t;
    }
};

struct OracleParams {
    std::size_t modes{200};
    double omega_max{0.0}; // 0: ten cutoffs
    double omega_min{0.0}; // 0: cutoff/50
    SamplingScheme scheme{SamplingScheme::linear};
};

struct ScenarioConfig {
    MoleculeParams molecule;
    SpectralDensity bath{SpectralDensity::null_bath()};
    UnitSystem units;
    TimeGrid grid;
    EvalPath path{EvalPath::general};
    double rel_tol{quad::default_rel_tol};
    OracleParams oracle;
    bool full_columns{true};
    bool two_level_warning{false};
    std::vector<std::pair<std::string, std::string>> echo; // resolved values, fixed order
};

struct ParsedConfig {
    std::optional<ScenarioConfig> config;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty() && config.has_value(); }
};

struct SweepSpec {
    std::string parameter; // eta | j0 | lambda | delta
    std::vector<double> values;
};

namespace detail_config {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct KeyTable {
    std::map<std::string, std::string> kv;
    std::vector<std::string> errors;

    bool has(const std::string& k) const { return kv.count(k) > 0; }
    std::optional<double> number(const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (...) {
            errors.push_back("key '" + k + "': not a number: '" + it->second + "'");
            return std::nullopt;
        }
    }
    std::optional<std::string> text(const std::string& k) const {
        auto it = kv.find(k);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    }
};

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "molecule.delta", "molecule.localization", "molecule.h", "molecule.omega-well",
        "molecule.eta",
        "units.mass", "units.energy", "units.length", "units.temperature",
        "bath.kind", "bath.j0", "bath.lambda", "bath.file",
        "gas.rho", "gas.thermal-energy", "gas.range",
        "debye.dipole", "debye.radius", "debye.eps-static", "debye.eps-highfreq",
        "debye.tau-d",
        "time.min", "time.max", "time.points", "time.scale",
        "run.path", "run.tol", "output.columns",
        "oracle.modes", "oracle.omega-max", "oracle.omega-min", "oracle.scheme",
        "sweep.parameter", "sweep.values",
    };
    return keys;
}

} // namespace detail_config

inline ParsedConfig parse_config(const std::string& text) {
    using namespace detail_config;
    ParsedConfig out;
    KeyTable tab;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            out.errors.push_back("line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) {
            out.errors.push_back("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            continue;
        }
        if (tab.kv.count(key))
            out.errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        tab.kv[key] = val;
    }

    ScenarioConfig cfg;

    // units
    if (auto v = tab.number("units.mass")) cfg.units.mass = *v;
    if (auto v = tab.number("units.energy")) cfg.units.energy = *v;
    if (auto v = tab.number("units.length")) cfg.units.length = *v;

    // molecule: either (delta, localization) or (omega-well, eta)
    const bool direct_mol = tab.has("molecule.delta") || tab.has("molecule.localization");
    const bool derived_mol = tab.has("molecule.omega-well") || tab.has("molecule.eta");
    if (direct_mol && derived_mol)
        out.errors.push_back("molecule: give either delta/localization or omega-well/eta, not both");
    if (auto v = tab.number("molecule.h")) cfg.molecule.planck = *v;
    if (derived_mol && !direct_mol) {
        const auto omega = tab.number("molecule.omega-well");
        const double eta = tab.number("molecule.eta").value_or(0.0);
        if (!omega) {
            out.errors.push_back("molecule: omega-well required with eta");
        } else if (*omega <= 0.0) {
            out.errors.push_back("molecule: omega-well must be positive");
        } else {
            cfg.molecule = derive_two_level(*omega, eta, cfg.units);
            if (tab.has("molecule.h")) cfg.molecule.planck = *tab.number("molecule.h");
            if (auto temp = tab.number("units.temperature"))
                cfg.two_level_warning =
                    !two_level_valid(*omega, cfg.units, cfg.units.thermal_energy(*temp));
        }
    } else {
        if (auto v = tab.number("molecule.delta")) cfg.molecule.tunneling = *v;
        if (auto v = tab.number("molecule.localization")) cfg.molecule.localization = *v;
    }
    if (!(cfg.molecule.tunneling > 0.0))
        out.errors.push_back("molecule: tunneling strength must be positive");
    if (!(cfg.molecule.planck > 0.0)) out.errors.push_back("molecule: h must be positive");

    // bath
    const std::string kind = tab.text("bath.kind").value_or("none");
    const bool has_direct = tab.has("bath.j0") || tab.has("bath.lambda");
    const bool has_gas = tab.has("gas.rho") || tab.has("gas.thermal-energy") || tab.has("gas.range");
    const bool has_debye = tab.has("debye.dipole") || tab.has("debye.radius") ||
                           tab.has("debye.eps-static") || tab.has("debye.eps-highfreq") ||
                           tab.has("debye.tau-d");
    const bool has_file = tab.has("bath.file");
    if (has_gas && has_debye)
        out.errors.push_back("bath: gas.* and debye.* blocks are mutually exclusive");
    if (has_direct && (has_gas || has_debye))
        out.errors.push_back("bath: direct j0/lambda conflicts with a micro/solvent block");
    if (has_file && (has_direct || has_gas || has_debye))
        out.errors.push_back("bath: tabulated file conflicts with other bath parameters");

    double j0 = tab.number("bath.j0").value_or(0.0);
    double lambda = tab.number("bath.lambda").value_or(0.0);
    if (kind == "none") {
        if (has_direct || has_gas || has_debye || has_file)
            out.errors.push_back("bath: parameters given but bath.kind = none");
        cfg.bath = SpectralDensity::null_bath();
    } else if (kind == "gas") {
        if (has_gas) {
            GasMicroParams g;
            if (auto v = tab.number("gas.rho")) g.number_density = *v;
            if (auto v = tab.number("gas.thermal-energy")) g.thermal_energy = *v;
            if (auto v = tab.number("gas.range")) g.interaction_range = *v;
            g.planck = cfg.molecule.planck;
            try {
                const GasFit fit = gas_params_from_micro(g);
                j0 = fit.j0;
                lambda = fit.lambda;
            } catch (const std::exception& e) {
                out.errors.push_back(std::string("bath: gas micro parameters invalid: ") + e.what());
            }
        } else if (!tab.has("bath.j0") || !tab.has("bath.lambda")) {
            out.errors.push_back("bath: kind gas needs bath.j0 and bath.lambda (or a gas.* block)");
        }
        if (j0 < 0.0 || !(lambda > 0.0))
            out.errors.push_back("bath: need j0 >= 0 and lambda > 0");
        else
            cfg.bath = SpectralDensity::sub_ohmic_gas(j0, lambda);
    } else if (kind == "debye") {
        if (has_debye) {
            DebyeSolventParams d;
            if (auto v = tab.number("debye.dipole")) d.dipole_change = *v;
            if (auto v = tab.number("debye.radius")) d.onsager_radius = *v;
            if (auto v = tab.number("debye.eps-static")) d.eps_static = *v;
            if (auto v = tab.number("debye.eps-highfreq")) d.eps_highfreq = *v;
            if (auto v = tab.number("debye.tau-d")) d.debye_time = *v;
            try {
                const DebyeFit fit = debye_params(d, cfg.units);
                j0 = fit.j0;
                lambda = fit.lambda;
            } catch (const std::exception& e) {
                out.errors.push_back(std::string("bath: debye solvent parameters invalid: ") +
                                     e.what());
            }
        } else if (!tab.has("bath.j0") || !tab.has("bath.lambda")) {
            out.errors.push_back("bath: kind debye needs bath.j0 and bath.lambda (or a debye.* block)");
        }
        if (j0 < 0.0 || !(lambda > 0.0))
            out.errors.push_back("bath: need j0 >= 0 and lambda > 0");
        else
            cfg.bath = SpectralDensity::ohmic_debye(j0, lambda);
    } else if (kind == "tabulated") {
        if (!has_file) {
            out.errors.push_back("bath: kind tabulated needs bath.file");
        } else {
            try {
                cfg.bath = load_tabulated_spectral_density(*tab.text("bath.file"));
            } catch (const std::exception& e) {
                out.errors.push_back(std::string("bath: ") + e.what());
            }
        }
    } else {
        out.errors.push_back("bath.kind must be none|gas|debye|tabulated");
    }

    // time grid
    if (!tab.has("time.max")) out.errors.push_back("time.max is required");
    if (auto v = tab.number("time.min")) cfg.grid.t_min = *v;
    if (auto v = tab.number("time.max")) cfg.grid.t_max = *v;
    if (auto v = tab.number("time.points")) cfg.grid.points = static_cast<int>(*v);
    if (auto s = tab.text("time.scale")) {
        if (*s == "log") cfg.grid.log_scale = true;
        else if (*s != "linear") out.errors.push_back("time.scale must be linear|log");
    }
    if (cfg.grid.t_min < 0.0) out.errors.push_back("time.min must be >= 0");
    if (!(cfg.grid.t_max > cfg.grid.t_min)) out.errors.push_back("time.max must exceed time.min");
    if (cfg.grid.points < 2) out.errors.push_back("time.points must be >= 2");

    // evaluation path
    if (auto s = tab.text("run.path")) {
        if (*s == "general") cfg.path = EvalPath::general;
        else if (*s == "dilute-closed-form") cfg.path = EvalPath::dilute_closed_form;
        else if (*s == "isolated") cfg.path = EvalPath::isolated;
        else if (*s == "oracle") cfg.path = EvalPath::oracle;
        else out.errors.push_back("run.path must be general|dilute-closed-form|isolated|oracle");
    }
    if (auto v = tab.number("run.tol")) {
        if (!(*v > 1e-12 && *v < 1e-2))
            out.errors.push_back("run.tol must lie in (1e-12, 1e-2)");
        else
            cfg.rel_tol = *v;
    }
    if (auto s = tab.text("output.columns")) {
        if (*s == "minimal") cfg.full_columns = false;
        else if (*s != "full") out.errors.push_back("output.columns must be full|minimal");
    }
    if (auto v = tab.number("oracle.modes")) {
        if (*v < 2) out.errors.push_back("oracle.modes must be >= 2");
        else cfg.oracle.modes = static_cast<std::size_t>(*v);
    }
    if (auto v = tab.number("oracle.omega-max")) cfg.oracle.omega_max = *v;
    if (auto v = tab.number("oracle.omega-min")) cfg.oracle.omega_min = *v;
    if (auto s = tab.text("oracle.scheme")) {
        if (*s == "log") cfg.oracle.scheme = SamplingScheme::logarithmic;
        else if (*s != "linear") out.errors.push_back("oracle.scheme must be linear|log");
    }

    out.errors.insert(out.errors.end(), tab.errors.begin(), tab.errors.end());
    if (!out.errors.empty()) return out;

    // resolved echo, fixed order
    auto fmt = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    cfg.echo = {
        {"molecule.delta", fmt(cfg.molecule.tunneling)},
        {"molecule.localization", fmt(cfg.molecule.localization)},
        {"molecule.h", fmt(cfg.molecule.planck)},
        {"bath.kind", kind},
        {"bath.j0", fmt(cfg.bath.coupling())},
        {"bath.lambda", fmt(cfg.bath.cutoff())},
        {"time.min", fmt(cfg.grid.t_min)},
        {"time.max", fmt(cfg.grid.t_max)},
        {"time.points", std::to_string(cfg.grid.points)},
        {"time.scale", cfg.grid.log_scale ? "log" : "linear"},
        {"run.path", tab.text("run.path").value_or("general")},
        {"run.tol", fmt(cfg.rel_tol)},
    };
    out.config = std::move(cfg);
    return out;
}

// Raw key/value scan of a config document (comments stripped, no validation).
inline std::map<std::string, std::string> scan_keys(const std::string& text) {
    std::map<std::string, std::string> keys;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        keys[detail_config::trim(line.substr(0, eq))] = detail_config::trim(line.substr(eq + 1));
    }
    return keys;
}

// Config key the sweep parameter patches per point.
inline std::string sweep_patch_key(const std::string& parameter) {
    if (parameter == "eta") return "molecule.eta";
    if (parameter == "delta") return "molecule.localization";
    if (parameter == "j0") return "bath.j0";
    if (parameter == "lambda") return "bath.lambda";
    return "";
}

struct SweepParse {
    SweepSpec sweep;
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

// The swept values come from sweep.values; the base document must not also
// fix the swept parameter.  Per-point validation happens when each patched
// document is parsed.
inline SweepParse parse_sweep(const std::string& text) {
    SweepParse out;
    const auto keys = scan_keys(text);
    if (auto it = keys.find("sweep.parameter"); it != keys.end())
        out.sweep.parameter = it->second;
    if (out.sweep.parameter.empty()) {
        out.errors.push_back("sweep.parameter is required for a sweep");
    } else if (sweep_patch_key(out.sweep.parameter).empty()) {
        out.errors.push_back("sweep.parameter must be eta|delta|j0|lambda");
    } else if (keys.count(sweep_patch_key(out.sweep.parameter))) {
        out.errors.push_back("sweep: parameter '" + out.sweep.parameter +
                             "' is also fixed by key '" + sweep_patch_key(out.sweep.parameter) +
                             "'");
    }
    auto it = keys.find("sweep.values");
    if (it == keys.end() || it->second.empty()) {
        out.errors.push_back("sweep.values must be a non-empty comma-separated list");
    } else {
        std::istringstream vs(it->second);
        std::string item;
        while (std::getline(vs, item, ',')) {
            try {
                out.sweep.values.push_back(std::stod(detail_config::trim(item)));
            } catch (...) {
                out.errors.push_back("sweep.values: not a number: '" + item + "'");
            }
        }
        if (out.sweep.values.empty())
            out.errors.push_back("sweep.values must be a non-empty comma-separated list");
    }
    return out;
}

} // namespace chiraldyn
