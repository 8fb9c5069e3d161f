// spectral.hpp — Spectral densities of the dilute (gas) and condensed (solvent)
// environments
//
// Closed forms:
//   gas     J(w) = J0 sqrt(w) exp(-w/L)   (sub-ohmic, temperature-dependent J0, L)
//   solvent J(w) = J0 w exp(-w/L)         (ohmic with Debye-relaxation cutoff)
// plus a microscopic collision integral for the gas and the Onsager-cavity
// parameters for a Debye solvent.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chiraldyn/quadrature.hpp"
#include "chiraldyn/units.hpp"

namespace chiraldyn {

enum class SpectralKind { sub_ohmic_gas, ohmic_debye, tabulated };

inline double gas_closed_form(double w, double j0, double lambda) {
    if (w < 0.0) throw std::invalid_argument("gas_closed_form: negative frequency");
    return j0 * std::sqrt(w) * std::exp(-w / lambda);
}

inline double debye_closed_form(double w, double j0, double lambda) {
    if (w < 0.0) throw std::invalid_argument("debye_closed_form: negative frequency");
    return j0 * w * std::exp(-w / lambda);
}

namespace detail {

// Fritsch-Carlson monotone cubic through (x, y); no over/undershoot, so a
// non-negative table stays non-negative between knots.
struct MonotoneCubic {
    std::vector<double> x, y, m;

    void build(std::vector<double> xs, std::vector<double> ys) {
        if (xs.size() < 2 || xs.size() != ys.size())
            throw std::invalid_argument("tabulated spectral density needs >= 2 rows");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (!(xs[i + 1] > xs[i]))
                throw std::invalid_argument("tabulated spectral density: omega not ascending");
        const std::size_t n = xs.size();
        std::vector<double> h(n - 1), d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = xs[i + 1] - xs[i];
            d[i] = (ys[i + 1] - ys[i]) / h[i];
        }
        m.assign(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0) {
                m[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
            }
        }
        auto endpoint = [](double h0, double h1, double d0, double d1) {
            double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (s * d0 <= 0.0) return 0.0;
            if (std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
            return s;
        };
        m[0] = n == 2 ? d[0] : endpoint(h[0], h[1], d[0], d[1]);
        m[n - 1] = n == 2 ? d[0] : endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
        x = std::move(xs);
        y = std::move(ys);
    }

    std::size_t interval(double xi) const {
        if (xi < x.front() || xi > x.back())
            throw std::out_of_range("tabulated spectral density: extrapolation forbidden");
        auto it = std::upper_bound(x.begin(), x.end(), xi);
        std::size_t i = static_cast<std::size_t>(std::distance(x.begin(), it));
        if (i > 0) --i;
        if (i + 1 >= x.size()) i = x.size() - 2;
        return i;
    }

    double value(double xi) const {
        const std::size_t i = interval(xi);
        const double h = x[i + 1] - x[i];
        const double s = (xi - x[i]) / h;
        const double s2 = s * s, s3 = s2 * s;
        return y[i] * (2 * s3 - 3 * s2 + 1) + h * m[i] * (s3 - 2 * s2 + s) +
               y[i + 1] * (-2 * s3 + 3 * s2) + h * m[i + 1] * (s3 - s2);
    }
};

} // namespace detail

// Immutable after construction; freely shareable between threads.
class SpectralDensity {
public:
    static SpectralDensity sub_ohmic_gas(double j0, double lambda) {
        return SpectralDensity(SpectralKind::sub_ohmic_gas, j0, lambda, 0.5);
    }
    static SpectralDensity ohmic_debye(double j0, double lambda) {
        return SpectralDensity(SpectralKind::ohmic_debye, j0, lambda, 1.0);
    }
    // J identically zero (isolated molecule) expressed as an ohmic form
    static SpectralDensity null_bath() { return ohmic_debye(0.0, 1.0); }

    static SpectralDensity tabulated(std::vector<double> omegas, std::vector<double> values) {
        SpectralDensity j(SpectralKind::tabulated, 0.0, 0.0, 0.0);
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (omegas[i] < 0.0 || values[i] < 0.0)
                throw std::invalid_argument("tabulated spectral density must be >= 0 on w >= 0");
        }
        if (omegas.front() == 0.0 && values.front() != 0.0)
            throw std::invalid_argument("tabulated spectral density: J(0) must vanish");
        j.table_.build(std::move(omegas), std::move(values));
        j.cutoff_ = j.table_.x.back() / 10.0;
        j.coupling_ = *std::max_element(j.table_.y.begin(), j.table_.y.end());
        return j;
    }

    SpectralKind kind() const { return kind_; }
    double coupling() const { return coupling_; }       // J0
    double cutoff() const { return cutoff_; }           // Lambda
    double exponent() const { return exponent_; }       // s
    bool is_null() const { return coupling_ == 0.0; }

    double value(double w) const {
        switch (kind_) {
        case SpectralKind::sub_ohmic_gas: return gas_closed_form(w, coupling_, cutoff_);
        case SpectralKind::ohmic_debye: return debye_closed_form(w, coupling_, cutoff_);
        case SpectralKind::tabulated: return table_.value(w);
        }
        return 0.0;
    }
    double operator()(double w) const { return value(w); }

    // dJ/dw; diverges at w = 0 for the sub-ohmic form.
    double derivative(double w) const {
        switch (kind_) {
        case SpectralKind::sub_ohmic_gas:
            if (!(w > 0.0))
                throw std::domain_error("spectral derivative: sub-ohmic dJ/dw has a pole at 0");
            return coupling_ * std::exp(-w / cutoff_) *
                   (0.5 / std::sqrt(w) - std::sqrt(w) / cutoff_);
        case SpectralKind::ohmic_debye:
            return coupling_ * std::exp(-w / cutoff_) * (1.0 - w / cutoff_);
        case SpectralKind::tabulated: {
            // finite-difference fallback on the interpolant
            const double lo = table_.x.front(), hi = table_.x.back();
            double h = 1e-4 * (hi - lo);
            h = std::min({h, w - lo, hi - w});
            if (!(h > 0.0))
                throw std::domain_error("spectral derivative: point on table boundary");
            return (table_.value(w + h) - table_.value(w - h)) / (2.0 * h);
        }
        }
        return 0.0;
    }

    // location of the maximum of the closed forms: w* = s * Lambda
    double peak_frequency() const {
        if (kind_ == SpectralKind::tabulated) {
            auto it = std::max_element(table_.y.begin(), table_.y.end());
            return table_.x[static_cast<std::size_t>(std::distance(table_.y.begin(), it))];
        }
        return exponent_ * cutoff_;
    }

    // domain ceiling for quadrature against this weight
    double domain_max(double pole, double t) const {
        double m = quad::tail_cutoff(cutoff_, pole, t);
        if (kind_ == SpectralKind::tabulated) m = std::min(m, table_.x.back());
        return m;
    }

private:
    SpectralDensity(SpectralKind k, double j0, double lambda, double s)
        : kind_(k), coupling_(j0), cutoff_(lambda), exponent_(s) {
        if (k != SpectralKind::tabulated) {
            if (j0 < 0.0) throw std::invalid_argument("spectral density: J0 must be >= 0");
            if (!(lambda > 0.0)) throw std::invalid_argument("spectral density: Lambda must be > 0");
        }
    }

    SpectralKind kind_;
    double coupling_;
    double cutoff_;
    double exponent_;
    detail::MonotoneCubic table_;
};

inline double spectral_derivative(double w, const SpectralDensity& j) { return j.derivative(w); }

// ---- microscopic gas model --------------------------------------------------

struct GasMicroParams {
    double number_density{1e-3};   // per R0^3
    double thermal_energy{1e-2};   // k_B T / U0
    double interaction_range{1.0}; // in units of R0
    double planck{0.1};

    double t_classical() const {
        return std::sqrt(interaction_range * interaction_range / (2.0 * thermal_energy));
    }
    double t_quantum() const { return planck / thermal_energy; }
    // validity of dropping the quantum-recoil term in the collision kernel
    bool neglect_ok() const {
        const double r = t_quantum() / t_classical();
        return r * r < 1e-2;
    }
    void validate() const {
        if (!(number_density > 0.0) || !(thermal_energy > 0.0) || !(interaction_range > 0.0) ||
            !(planck > 0.0))
            throw std::invalid_argument("GasMicroParams: all parameters must be positive");
    }
};

// Collision-kernel spectral density
//   J(w) = (rho t_c / R) e^{w t_Q} Int d^3q |a(q)|^2/q exp(-w^2 t_c^2/q^2 - t_Q^2 q^2/t_c^2)
// with the Gaussian form factor |a(q)|^2 = e^{-q^2} and the angular part of
// d^3q carried out, leaving the radial weight q dq.  Evaluated by adaptive
// quadrature; non-convergence is reported through the result.
inline quad::QuadratureResult gas_micro_integral_result(double w, const GasMicroParams& g,
                                                        double rel_tol = quad::default_rel_tol) {
    if (w < 0.0) throw std::invalid_argument("gas_micro_integral: negative frequency");
    g.validate();
    const double tc = g.t_classical();
    const double tq = g.t_quantum();
    const double beta = 1.0 + (tq * tq) / (tc * tc);
    const double a = w * w * tc * tc;

    auto integrand = [&](double q) {
        const double q2 = q * q;
        const double arg = beta * q2 + (q2 > 0.0 ? a / q2 : 0.0);
        return q * std::exp(-arg);
    };
    const double qmax = std::sqrt(45.0 / beta) + std::pow(a, 0.25);
    const double qpeak = a > 0.0 ? std::pow(a / beta, 0.25) : 0.0;

    quad::QuadratureResult r;
    if (qpeak > 0.0 && qpeak < qmax) {
        r += quad::detail::gk_adaptive(integrand, 0.0, qpeak, rel_tol);
        r += quad::detail::gk_adaptive(integrand, qpeak, qmax, rel_tol);
    } else {
        r += quad::detail::gk_adaptive(integrand, 0.0, qmax, rel_tol);
    }
    const double prefactor =
        g.number_density * tc / g.interaction_range * std::exp(w * tq);
    r.value *= prefactor;
    r.error_estimate *= prefactor;
    return r;
}

inline double gas_micro_integral(double w, const GasMicroParams& g,
                                 double rel_tol = quad::default_rel_tol) {
    return gas_micro_integral_result(w, g, rel_tol).value;
}

struct GasFit {
    double j0{0.0};
    double lambda{0.0};
    double match_constant{0.0};   // C in J0 = C rho E_th^{-3/4}
    double max_rel_deviation{0.0}; // residual of the closed form against the integral
};

// Cutoff Lambda = 2/(4 t_c - t_Q); amplitude J0 fixed by a least-squares match
// of the closed form to the collision integral on w in [0.1 L, 5 L].
inline GasFit gas_params_from_micro(const GasMicroParams& g) {
    g.validate();
    const double tc = g.t_classical();
    const double tq = g.t_quantum();
    if (!(4.0 * tc > tq))
        throw std::domain_error("gas_params_from_micro: requires 4 t_c > t_Q");
    GasFit fit;
    fit.lambda = 2.0 / (4.0 * tc - tq);

    const int n = 33;
    const double lo = 0.1 * fit.lambda, hi = 5.0 * fit.lambda;
    double acc = 0.0;
    std::vector<double> ws(n), lnj(n);
    for (int i = 0; i < n; ++i) {
        const double w = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        ws[i] = w;
        lnj[i] = std::log(gas_micro_integral(w, g));
        acc += lnj[i] - 0.5 * std::log(w) + w / fit.lambda;
    }
    fit.j0 = std::exp(acc / n);
    fit.match_constant = fit.j0 / (g.number_density * std::pow(g.thermal_energy, -0.75));
    for (int i = 0; i < n; ++i) {
        const double closed = gas_closed_form(ws[i], fit.j0, fit.lambda);
        fit.max_rel_deviation =
            std::max(fit.max_rel_deviation, std::abs(closed - std::exp(lnj[i])) / closed);
    }
    return fit;
}

// ---- Debye solvent (Onsager cavity) ----------------------------------------

struct DebyeSolventParams {
    double dipole_change{0.6};    // debye
    double onsager_radius{1.0};   // angstrom
    double eps_static{78.3};
    double eps_highfreq{4.21};
    double debye_time{8.2e-12};   // s

    void validate() const {
        if (!(eps_static > eps_highfreq && eps_highfreq > 1.0))
            throw std::invalid_argument("DebyeSolventParams: need eps_s > eps_inf > 1");
        if (!(debye_time > 0.0))
            throw std::invalid_argument("DebyeSolventParams: Debye time must be positive");
        if (!(dipole_change > 0.0) || !(onsager_radius > 0.0))
            throw std::invalid_argument("DebyeSolventParams: dipole and radius must be positive");
    }
};

struct DebyeFit {
    double j0{0.0};
    double lambda{0.0}; // dimensionless cutoff Lambda_phys * tau0
};

// Cutoff Lambda = (1/tau_D) (2 eps_s + 1)/(2 eps_inf + 1), made dimensionless
// with tau0.  Coupling follows the cavity rule J0 = 22 (dmu)^2 / a^3 for dmu
// in debye and a in angstrom (exact for the water response; other solvents
// scale by their dielectric response factor 6 (eps_s - eps_inf) tau_D /
// (2 eps_s + 1)^2 relative to water).
inline DebyeFit debye_params(const DebyeSolventParams& d, const UnitSystem& u) {
    d.validate();
    if (!(u.tau0() > 0.0)) throw std::invalid_argument("debye_params: non-positive tau0");

    DebyeFit fit;
    const double lambda_phys =
        (1.0 / d.debye_time) * (2.0 * d.eps_static + 1.0) / (2.0 * d.eps_highfreq + 1.0);
    fit.lambda = lambda_phys * u.tau0();

    auto response = [](double es, double einf, double tau) {
        return 6.0 * (es - einf) * tau / ((2.0 * es + 1.0) * (2.0 * es + 1.0));
    };
    const double water = response(78.3, 4.21, 8.2e-12);
    const double mu2_a3 = d.dipole_change * d.dipole_change /
                          (d.onsager_radius * d.onsager_radius * d.onsager_radius);
    fit.j0 = 22.0 * mu2_a3 * response(d.eps_static, d.eps_highfreq, d.debye_time) / water;
    return fit;
}

// ---- tabulated import/export ------------------------------------------------

// Two-column plain text, "omega<TAB>J", ascending omega, '#' comments.
inline SpectralDensity read_tabulated_spectral_density(std::istream& in) {
    std::vector<double> ws, js;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream row(line);
        double w, j;
        if (!(row >> w >> j))
            throw std::invalid_argument("tabulated spectral density: bad row at line " +
                                        std::to_string(lineno));
        ws.push_back(w);
        js.push_back(j);
    }
    return SpectralDensity::tabulated(std::move(ws), std::move(js));
}

inline SpectralDensity load_tabulated_spectral_density(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spectral density file: " + path);
    return read_tabulated_spectral_density(in);
}

inline void write_tabulated_spectral_density(std::ostream& out, const SpectralDensity& j,
                                             double omega_max, int points) {
    out << "# omega\tJ\n";
    char buf[64];
    for (int i = 0; i < points; ++i) {
        const double w = omega_max * static_cast<double>(i) / (points - 1);
        std::snprintf(buf, sizeof buf, "%.12g\t%.12g\n", w, j.value(w));
        out << buf;
    }
}

} // namespace chiraldyn
