// scenario.hpp — Scenario runs, figure reproductions, sweeps and the oracle
// comparison report

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chiraldyn/config.hpp"
#include "chiraldyn/discrete_bath.hpp"
#include "chiraldyn/dynamics.hpp"

namespace chiraldyn {

struct ScenarioResult {
    std::vector<double> t;
    std::vector<double> p_right;
    std::vector<double> p1, p2, re_coh, im_coh; // filled on the general paths
    std::size_t clipped_points{0};
    double max_clip_excess{0.0};
    double weak_coupling_ratio{0.0};
    double gamma2{0.0};
    double equilibrium{0.0};
};

inline ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    ScenarioResult res;
    res.t = cfg.grid.times();
    const std::size_t n = res.t.size();
    res.p_right.resize(n);

    if (cfg.path == EvalPath::isolated) {
        for (std::size_t i = 0; i < n; ++i)
            res.p_right[i] = isolated_tunneling_probability(cfg.molecule, res.t[i]);
        res.equilibrium = 0.5 * isolated_amplitude(cfg.molecule); // oscillation mean
        return res;
    }

    if (cfg.path == EvalPath::oracle) {
        const double lam = cfg.bath.cutoff();
        const double wmax = cfg.oracle.omega_max > 0.0 ? cfg.oracle.omega_max : 10.0 * lam;
        const double wmin = cfg.oracle.omega_min > 0.0 ? cfg.oracle.omega_min : lam / 50.0;
        const auto bath =
            DiscreteBath::discretize(cfg.bath, cfg.oracle.modes, wmax, cfg.oracle.scheme, wmin);
        TruncatedBathEvolution ev(cfg.molecule, bath);
        const auto samples = ev.evolve(ev.left_state(), res.t);
        for (std::size_t i = 0; i < n; ++i) res.p_right[i] = samples[i].p_right;
        return res;
    }

    PerturbativeEvolution ev(
        PerturbativeInputs::left_start(cfg.molecule, cfg.bath, cfg.rel_tol));
    res.weak_coupling_ratio = ev.weak_coupling_ratio();
    res.gamma2 = ev.gamma2();
    res.equilibrium = ev.equilibrium_p_right(cfg.path == EvalPath::dilute_closed_form);

    if (cfg.path == EvalPath::dilute_closed_form) {
        for (std::size_t i = 0; i < n; ++i)
            res.p_right[i] = ev.p_right_dilute_closed_form(res.t[i]);
        return res;
    }

    res.p1.resize(n);
    res.p2.resize(n);
    res.re_coh.resize(n);
    res.im_coh.resize(n);
    const double th = cfg.molecule.mixing_angle();
    const double c2th = std::cos(th) * std::cos(th);
    const double s2th = std::sin(th) * std::sin(th);
    const double s2 = cfg.molecule.sigma_offdiag();
    for (std::size_t i = 0; i < n; ++i) {
        const ChiOverlaps chi = ev.chi_overlaps(res.t[i]);
        res.p1[i] = chi.p1;
        res.p2[i] = chi.p2;
        res.re_coh[i] = chi.coherence.real();
        res.im_coh[i] = chi.coherence.imag();
        const double raw = c2th * chi.p1 + s2th * chi.p2 + s2 * chi.coherence.real();
        res.p_right[i] = std::clamp(raw, 0.0, 1.0);
        if (raw != res.p_right[i]) {
            ++res.clipped_points;
            res.max_clip_excess =
                std::max(res.max_clip_excess, std::max(raw - 1.0, -raw));
        }
    }
    return res;
}

inline void write_scenario_csv(std::ostream& out, const ScenarioConfig& cfg,
                               const ScenarioResult& res) {
    char buf[64];
    for (const auto& [k, v] : cfg.echo) out << "# " << k << " = " << v << "\n";
    std::snprintf(buf, sizeof buf, "%.6g", res.gamma2);
    out << "# gamma2 = " << buf << "\n";
    std::snprintf(buf, sizeof buf, "%.6g", res.weak_coupling_ratio);
    out << "# weak_coupling_ratio = " << buf << "\n";
    out << "# clipped_points = " << res.clipped_points << "\n";
    const bool full = cfg.full_columns && !res.p1.empty();
    out << (full ? "t,P_R,P1,P2,Re_coh,Im_coh\n" : "t,P_R\n");
    for (std::size_t i = 0; i < res.t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g", res.t[i], res.p_right[i]);
        out << buf;
        if (full) {
            std::snprintf(buf, sizeof buf, ",%.12g,%.12g,%.12g,%.12g", res.p1[i], res.p2[i],
                          res.re_coh[i], res.im_coh[i]);
            out << buf;
        }
        out << "\n";
    }
}

// Atomic per-curve file write: stage then rename.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << contents;
    }
    std::filesystem::rename(tmp, path);
}

// ---- equilibration-rate extraction ------------------------------------------

struct RateFit {
    double rate{0.0};
    double amplitude{0.0};
    std::size_t points_used{0};
    bool ok{false};
};

// Least-squares exponential fit A exp(-r t) through the envelope maxima of
// |p(t) - p_inf|.  When the oscillation period is known, maxima are taken
// block-wise over half-period windows; monotone signals fall back to
// above-floor samples.
inline RateFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& p,
                              double p_inf, double block_width = 0.0,
                              double noise_floor = 5e-7) {
    RateFit fit;
    const std::size_t n = t.size();
    if (n < 4) return fit;
    std::vector<double> r(n);
    double rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = std::abs(p[i] - p_inf);
        rmax = std::max(rmax, r[i]);
    }
    const double floor = std::max(noise_floor, 1e-3 * rmax);

    std::vector<std::size_t> idx;
    if (block_width > 0.0) {
        std::size_t best = 0;
        bool have = false;
        double edge = t.front() + block_width;
        for (std::size_t i = 0; i < n; ++i) {
            if (t[i] > edge) {
                if (have && r[best] > floor) idx.push_back(best);
                have = false;
                while (t[i] > edge) edge += block_width;
            }
            if (!have || r[i] > r[best]) {
                best = i;
                have = true;
            }
        }
        if (have && r[best] > floor) idx.push_back(best);
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i)
            if (r[i] >= r[i - 1] && r[i] > r[i + 1] && r[i] > floor) idx.push_back(i);
    }
    if (idx.size() < 3) {
        idx.clear();
        const std::size_t stride = std::max<std::size_t>(1, n / 200);
        for (std::size_t i = 0; i < n; i += stride)
            if (r[i] > floor) idx.push_back(i);
    }
    if (idx.size() < 3) return fit;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i : idx) {
        const double x = t[i], y = std::log(r[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(idx.size());
    const double denom = m * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0)) return fit;
    const double slope = (m * sxy - sx * sy) / denom;
    fit.rate = -slope;
    fit.amplitude = std::exp((sy - slope * sx) / m);
    fit.points_used = idx.size();
    fit.ok = true;
    return fit;
}

// ---- figure reproductions ----------------------------------------------------

struct CurveSpec {
    std::string name;
    ScenarioConfig config;
};

namespace detail_figures {

inline ScenarioConfig base_config(double localization, SpectralDensity bath, EvalPath path,
                                  double t_max, int points = 1000) {
    ScenarioConfig cfg;
    cfg.molecule.tunneling = 1e-3;
    cfg.molecule.localization = localization;
    cfg.molecule.planck = 0.1;
    cfg.bath = std::move(bath);
    cfg.grid = TimeGrid{0.0, t_max, points, false};
    cfg.path = path;
    auto fmt = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    cfg.echo = {
        {"molecule.delta", fmt(cfg.molecule.tunneling)},
        {"molecule.localization", fmt(localization)},
        {"molecule.h", fmt(cfg.molecule.planck)},
        {"bath.j0", fmt(cfg.bath.coupling())},
        {"bath.lambda", fmt(cfg.bath.cutoff())},
        {"time.max", fmt(t_max)},
    };
    return cfg;
}

inline std::string tag(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%g", v);
    std::string s(buf);
    for (auto& c : s)
        if (c == '+' || c == '.') c = c == '+' ? 'p' : '_';
    return s;
}

} // namespace detail_figures

// Curve sets behind the published panels.  Dilute panels default to the gas
// form (J0 = 1e-3, Lambda = 0.5), condensed panels to the solvent form
// (J0 = 10, Lambda = 0.01); horizons 1e4 isolated, 2e4 dilute, 2e3 condensed.
inline std::vector<CurveSpec> figure_curves(const std::string& id) {
    using detail_figures::base_config;
    using detail_figures::tag;
    std::vector<CurveSpec> out;
    auto gas = [](double j0, double lam) { return SpectralDensity::sub_ohmic_gas(j0, lam); };
    auto debye = [](double j0, double lam) { return SpectralDensity::ohmic_debye(j0, lam); };

    if (id == "fig1a") {
        for (double eta : {1e-4, 1e-3, 1e-2})
            out.push_back({"eta" + tag(eta),
                           base_config(eta, SpectralDensity::null_bath(), EvalPath::isolated, 1e4)});
    } else if (id == "fig2a") {
        for (double d : {1e-5, -1e-5})
            out.push_back({"delta" + tag(d),
                           base_config(d, gas(1e-3, 0.5), EvalPath::general, 2e4)});
    } else if (id == "fig2b") {
        for (double mag : {1e-5, 1e-4, 1e-3})
            for (double sgn : {1.0, -1.0})
                out.push_back({"delta" + tag(sgn * mag),
                               base_config(sgn * mag, debye(10.0, 0.01), EvalPath::general, 2e3)});
    } else if (id == "fig3a") {
        for (double j0 : {1e-4, 1e-3, 1e-2})
            out.push_back({"j0" + tag(j0),
                           base_config(1e-5, gas(j0, 0.5), EvalPath::general, 2e4)});
    } else if (id == "fig3b") {
        for (double j0 : {10.0, 20.0, 30.0})
            out.push_back({"j0" + tag(j0),
                           base_config(1e-5, debye(j0, 0.01), EvalPath::general, 2e3)});
    } else if (id == "fig4a") {
        for (double lam : {1e-1, 1e-2, 1e-3})
            out.push_back({"lambda" + tag(lam),
                           base_config(1e-5, gas(1e-3, lam), EvalPath::general, 2e4)});
    } else if (id == "fig4b") {
        for (double lam : {1e-2, 1e-1, 1.0})
            out.push_back({"lambda" + tag(lam),
                           base_config(1e-5, debye(10.0, lam), EvalPath::general, 2e3)});
    } else if (id != "fig1b") {
        throw std::invalid_argument("unknown figure id: " + id);
    }
    return out;
}

// fig1b is a scan over the asymmetry at fixed time rather than a time series.
inline std::string figure_1b_csv(int points = 61, double t_fixed = 1000.0) {
    std::ostringstream out;
    out << "# figure = fig1b\n# molecule.delta = 0.001\n# t = " << t_fixed << "\n";
    out << "eta,P_R,envelope\n";
    char buf[96];
    for (int i = 0; i < points; ++i) {
        const double eta = 1e-4 * std::pow(100.0, static_cast<double>(i) / (points - 1));
        MoleculeParams m;
        m.tunneling = 1e-3;
        m.localization = eta; // Table-scale identification delta = eta
        m.planck = 0.1;
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", eta,
                      isolated_tunneling_probability(m, t_fixed), isolated_amplitude(m));
        out << buf;
    }
    return out.str();
}

// Renders every curve of a figure into "<dir>/<id>_<curve>.csv".
inline std::vector<std::filesystem::path> reproduce_figure(const std::string& id,
                                                           const std::filesystem::path& dir,
                                                           unsigned threads = 1) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    if (id == "fig1b") {
        const auto path = dir / "fig1b.csv";
        write_file_atomic(path, figure_1b_csv());
        return {path};
    }
    const auto curves = figure_curves(id);
    std::vector<std::future<std::string>> jobs;
    const unsigned workers = std::max(1u, threads);
    for (const auto& c : curves) {
        auto task = [&c]() {
            std::ostringstream buf;
            write_scenario_csv(buf, c.config, run_scenario(c.config));
            return buf.str();
        };
        jobs.push_back(workers > 1 ? std::async(std::launch::async, task)
                                   : std::async(std::launch::deferred, task));
    }
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto path = dir / (id + "_" + curves[i].name + ".csv");
        write_file_atomic(path, jobs[i].get());
        written.push_back(path);
    }
    return written;
}

// ---- sweeps -------------------------------------------------------------------

struct SweepRow {
    double value{0.0};
    double long_time_mean{0.0};
    double fitted_rate{0.0};
    double gamma2{0.0};
    double envelope_amplitude{0.0};
    bool ok{false};
    std::string error;
};

struct SweepOutcome {
    std::vector<SweepRow> rows;
    std::string csv;
};

inline SweepOutcome run_sweep_text(const std::string& base_text, const SweepSpec& sweep,
                                   unsigned threads = 1) {
    SweepOutcome out;
    const std::string key = sweep_patch_key(sweep.parameter);
    auto one = [&](double v) {
        SweepRow row;
        row.value = v;
        char patch[96];
        std::snprintf(patch, sizeof patch, "\n%s = %.17g\n", key.c_str(), v);
        const ParsedConfig parsed = parse_config(base_text + patch);
        if (!parsed.ok()) {
            row.error = parsed.errors.empty() ? "invalid config" : parsed.errors.front();
            return row;
        }
        try {
            const ScenarioConfig& cfg = *parsed.config;
            const ScenarioResult res = run_scenario(cfg);
            const std::size_t n = res.t.size();
            const std::size_t tail = std::max<std::size_t>(1, n / 5);
            double acc = 0.0;
            for (std::size_t i = n - tail; i < n; ++i) acc += res.p_right[i];
            row.long_time_mean = acc / static_cast<double>(tail);
            const double p_inf =
                cfg.path == EvalPath::isolated || cfg.path == EvalPath::oracle
                    ? row.long_time_mean
                    : res.equilibrium;
            double block = 0.0;
            if (cfg.path == EvalPath::general || cfg.path == EvalPath::dilute_closed_form) {
                PerturbativeEvolution ev(
                    PerturbativeInputs::left_start(cfg.molecule, cfg.bath, cfg.rel_tol));
                block = std::numbers::pi / std::abs(ev.renormalized_gap());
            } else if (cfg.path == EvalPath::isolated) {
                block = 0.5 * isolated_period(cfg.molecule);
            }
            row.fitted_rate = fit_decay_rate(res.t, res.p_right, p_inf, block).rate;
            row.gamma2 = res.gamma2;
            row.envelope_amplitude = isolated_amplitude(cfg.molecule);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        return row;
    };

    std::vector<std::future<SweepRow>> jobs;
    const unsigned workers = std::max(1u, threads);
    for (double v : sweep.values)
        jobs.push_back(workers > 1 ? std::async(std::launch::async, one, v)
                                   : std::async(std::launch::deferred, one, v));
    std::ostringstream csv;
    csv << "# sweep.parameter = " << sweep.parameter << "\n";
    csv << "value,long_time_mean,fitted_rate,gamma2,envelope_amplitude,status\n";
    char buf[192];
    for (auto& j : jobs) {
        SweepRow row = j.get();
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%s\n", row.value,
                      row.long_time_mean, row.fitted_rate, row.gamma2, row.envelope_amplitude,
                      row.ok ? "ok" : "failed");
        csv << buf;
        out.rows.push_back(std::move(row));
    }
    out.csv = csv.str();
    return out;
}

// ---- oracle comparison ---------------------------------------------------------

struct OracleComparison {
    std::vector<double> t, p_pert, p_oracle;
    double max_abs_diff{0.0};
    double max_double_occupation{0.0};
    double min_norm{1.0}, max_norm{1.0};
    double reconstruction_residual{0.0};
    bool truncation_valid{true}; // two-quantum weight stayed below 1e-3
    bool pass{false};            // max |diff| <= 0.01
    double weak_coupling_ratio{0.0};
};

inline OracleComparison oracle_compare(const ScenarioConfig& cfg, std::size_t modes,
                                       double omega_max, double omega_min = 0.0) {
    OracleComparison cmp;
    cmp.t = cfg.grid.times();

    PerturbativeEvolution pert(
        PerturbativeInputs::left_start(cfg.molecule, cfg.bath, cfg.rel_tol));
    cmp.weak_coupling_ratio = pert.weak_coupling_ratio();
    cmp.p_pert.resize(cmp.t.size());
    for (std::size_t i = 0; i < cmp.t.size(); ++i)
        cmp.p_pert[i] = pert.p_right_general(cmp.t[i]);

    const double lam = cfg.bath.cutoff();
    const double wmax = omega_max > 0.0 ? omega_max : 10.0 * lam;
    const double wmin = omega_min > 0.0 ? omega_min : lam / 50.0;
    const auto bath = DiscreteBath::discretize(cfg.bath, modes, wmax, cfg.oracle.scheme, wmin);
    cmp.reconstruction_residual = bath.reconstruction_residual;
    TruncatedBathEvolution ev(cfg.molecule, bath);
    const auto samples = ev.evolve(ev.left_state(), cmp.t);

    cmp.p_oracle.resize(cmp.t.size());
    for (std::size_t i = 0; i < cmp.t.size(); ++i) {
        cmp.p_oracle[i] = samples[i].p_right;
        cmp.max_abs_diff = std::max(cmp.max_abs_diff, std::abs(cmp.p_oracle[i] - cmp.p_pert[i]));
        cmp.max_double_occupation = std::max(cmp.max_double_occupation, samples[i].double_occupation);
        cmp.min_norm = std::min(cmp.min_norm, samples[i].norm);
        cmp.max_norm = std::max(cmp.max_norm, samples[i].norm);
    }
    cmp.truncation_valid = cmp.max_double_occupation < 1e-3;
    cmp.pass = cmp.max_abs_diff <= 0.01;
    return cmp;
}

inline void write_oracle_report(std::ostream& out, const OracleComparison& cmp) {
    char buf[160];
    out << "t, P_R_perturbative, P_R_oracle, abs_diff\n";
    for (std::size_t i = 0; i < cmp.t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g, %.12g, %.12g, %.3e\n", cmp.t[i], cmp.p_pert[i],
                      cmp.p_oracle[i], std::abs(cmp.p_oracle[i] - cmp.p_pert[i]));
        out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "max_abs_deviation = %.3e (threshold 0.01: %s)\n", cmp.max_abs_diff,
                  cmp.pass ? "pass" : "fail");
    out << buf;
    std::snprintf(buf, sizeof buf, "max_double_occupation = %.3e (truncation %s)\n",
                  cmp.max_double_occupation, cmp.truncation_valid ? "valid" : "invalid");
    out << buf;
    std::snprintf(buf, sizeof buf, "norm_range = [%.9f, %.9f]\n", cmp.min_norm, cmp.max_norm);
    out << buf;
}

} // namespace chiraldyn
