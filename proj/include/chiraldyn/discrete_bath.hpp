// discrete_bath.hpp — Brute-force validator on a finite bath
//
// The continuous spectral density is sampled into N modes through the
// inversion gamma_a^2 = (2/pi) J(w_a) dw_a / w_a^3 and the full
// molecule+bath state is evolved exactly inside the space with at most two
// bath quanta,
//   {|n>|vac>, |n>|a>, |n>|ab>},  dim = 2 (1 + N + N(N+1)/2).
// The generator is assembled in frequency units (the same h-absorbed
// convention as the perturbative module):
//   G = diag(-+W/2) + sum_a w_a n_a - sum_a k_a sigma_z (a_a + a_a^+) + c,
//   k_a = w_a^{3/2} gamma_a / sqrt(2 h),   c = -sum_a w_a^2 gamma_a^2 / (2 h).
// Propagation uses a Chebyshev expansion of exp(-i G dt), which preserves the
// norm to the expansion tolerance; norm and two-quantum occupation are
// monitored at every output point.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "chiraldyn/molecule.hpp"
#include "chiraldyn/quadrature.hpp"
#include "chiraldyn/spectral.hpp"

namespace chiraldyn {

enum class SamplingScheme { linear, logarithmic };

struct BathMode {
    double omega{0.0};
    double gamma{0.0};
};

struct DiscreteBath {
    std::vector<BathMode> modes;
    std::vector<double> bin_width;
    double omega_min{0.0};
    double omega_max{0.0};
    SamplingScheme scheme{SamplingScheme::linear};
    double reconstruction_residual{0.0}; // max bin-integral mismatch of J

    static DiscreteBath discretize(const SpectralDensity& j, std::size_t n, double omega_max,
                                   SamplingScheme scheme = SamplingScheme::linear,
                                   double omega_min = 0.0) {
        if (n < 2) throw std::invalid_argument("discretize: need at least 2 modes");
        if (!(omega_max > 0.0)) throw std::invalid_argument("discretize: omega_max must be > 0");
        if (omega_min == 0.0) omega_min = omega_max / 500.0; // default floor, grid must avoid 0
        if (!(omega_min > 0.0) || !(omega_min < omega_max))
            throw std::invalid_argument("discretize: mode grid must lie strictly above 0");

        DiscreteBath b;
        b.omega_min = omega_min;
        b.omega_max = omega_max;
        b.scheme = scheme;
        std::vector<double> edges(n + 1);
        for (std::size_t k = 0; k <= n; ++k) {
            const double f = static_cast<double>(k) / n;
            edges[k] = scheme == SamplingScheme::linear
                           ? omega_min + f * (omega_max - omega_min)
                           : omega_min * std::pow(omega_max / omega_min, f);
        }
        b.modes.resize(n);
        b.bin_width.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = 0.5 * (edges[k] + edges[k + 1]);
            const double dw = edges[k + 1] - edges[k];
            const double jw = j.value(w);
            b.modes[k] = {w, std::sqrt(2.0 / std::numbers::pi * jw * dw / (w * w * w))};
            b.bin_width[k] = dw;
            const double bin = quad::detail::gk_adaptive(j, edges[k], edges[k + 1], 1e-10).value;
            const double mismatch = std::abs(jw * dw - bin) / std::max(bin, 1e-300);
            if (bin > 1e-300)
                b.reconstruction_residual = std::max(b.reconstruction_residual, mismatch);
        }
        return b;
    }
};

// Lorentzian-broadened golden-rule rate from the sampled modes; converges to
// (2/h) sin^2(2 theta) J(W) as the grid refines.
struct DiscreteRate {
    double value{0.0};
    bool under_resolved{false}; // broadening narrower than the local mode spacing
};

inline DiscreteRate golden_rule_discrete(const MoleculeParams& m, const DiscreteBath& b,
                                         double broadening) {
    m.validate();
    if (!(broadening > 0.0))
        throw std::invalid_argument("golden_rule_discrete: broadening must be positive");
    const double W = m.gap();
    const double s2 = m.sigma_offdiag();
    double acc = 0.0;
    double local_spacing = 0.0;
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < b.modes.size(); ++k) {
        const auto& md = b.modes[k];
        const double x = W - md.omega;
        const double lor = broadening / std::numbers::pi / (x * x + broadening * broadening);
        const double w3 = md.omega * md.omega * md.omega;
        acc += 0.5 * std::numbers::pi * md.gamma * md.gamma * w3 * lor;
        if (std::abs(x) < nearest) {
            nearest = std::abs(x);
            local_spacing = b.bin_width[k];
        }
    }
    DiscreteRate r;
    r.value = (2.0 / m.planck) * s2 * s2 * acc;
    r.under_resolved = broadening * (1.0 + 1e-9) < 2.0 * local_spacing;
    return r;
}

// ---- truncated two-quantum evolution ----------------------------------------

struct EvolutionSample {
    double t{0.0};
    double p_right{0.0};
    double norm{1.0};
    double double_occupation{0.0}; // total weight in the two-quantum sector
};

class TruncatedBathEvolution {
public:
    TruncatedBathEvolution(const MoleculeParams& m, const DiscreteBath& b,
                           std::size_t memory_cap_bytes = std::size_t(2) << 30)
        : mol_(m), bath_(b) {
        m.validate();
        n_ = b.modes.size();
        dim_ = 2 * (1 + n_ + n_ * (n_ + 1) / 2);
        if (dim_ * sizeof(std::complex<double>) * 8 > memory_cap_bytes)
            throw std::length_error("truncated bath space exceeds the memory bound");

        const double h = m.planck;
        c2_ = m.sigma_diag();
        s2_ = m.sigma_offdiag();
        theta_ = m.mixing_angle();
        k_.resize(n_);
        counterterm_ = 0.0;
        for (std::size_t a = 0; a < n_; ++a) {
            const auto& md = b.modes[a];
            k_[a] = std::pow(md.omega, 1.5) * md.gamma / std::sqrt(2.0 * h);
            counterterm_ -= md.omega * md.omega * md.gamma * md.gamma / (2.0 * h);
        }

        diag_.resize(dim_);
        const double e[2] = {-0.5 * m.gap(), 0.5 * m.gap()};
        for (int nlv = 0; nlv < 2; ++nlv) diag_[vac(nlv)] = e[nlv] + counterterm_;
        for (std::size_t a = 0; a < n_; ++a)
            for (int nlv = 0; nlv < 2; ++nlv)
                diag_[single(a, nlv)] = e[nlv] + b.modes[a].omega + counterterm_;
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t bb = a; bb < n_; ++bb)
                for (int nlv = 0; nlv < 2; ++nlv)
                    diag_[pair_state(a, bb, nlv)] =
                        e[nlv] + b.modes[a].omega + b.modes[bb].omega + counterterm_;
    }

    std::size_t dimension() const { return dim_; }
    double counterterm() const { return counterterm_; }

    std::size_t vac(int level) const { return static_cast<std::size_t>(level); }
    std::size_t single(std::size_t a, int level) const { return 2 + 2 * a + level; }
    std::size_t pair_state(std::size_t a, std::size_t b, int level) const {
        // a <= b, packed upper triangle
        const std::size_t p = a * n_ - a * (a - 1) / 2 + (b - a);
        return 2 + 2 * n_ + 2 * p + level;
    }

    using State = std::vector<std::complex<double>>;

    State initial_state(std::complex<double> a1, std::complex<double> a2) const {
        State psi(dim_, {0.0, 0.0});
        const double n = std::sqrt(std::norm(a1) + std::norm(a2));
        if (!(n > 0.0)) throw std::invalid_argument("initial state must be non-zero");
        psi[vac(0)] = a1 / n;
        psi[vac(1)] = a2 / n;
        return psi;
    }
    State left_state() const { return initial_state(std::sin(theta_), -std::cos(theta_)); }

    // y = G x
    void apply(const State& x, State& y) const {
        for (std::size_t i = 0; i < dim_; ++i) y[i] = diag_[i] * x[i];
        auto kick = [&](std::size_t from, std::size_t to, double amp) {
            // adds -amp * sigma_z acting between molecular doublets at from/to
            const std::complex<double> x0 = x[from], x1 = x[from + 1];
            y[to] -= amp * (c2_ * x0 + s2_ * x1);
            y[to + 1] -= amp * (s2_ * x0 - c2_ * x1);
        };
        for (std::size_t a = 0; a < n_; ++a) {
            kick(vac(0), single(a, 0), k_[a]);
            kick(single(a, 0), vac(0), k_[a]);
        }
        const double rt2 = std::numbers::sqrt2;
        for (std::size_t a = 0; a < n_; ++a) {
            for (std::size_t bb = 0; bb < n_; ++bb) {
                const std::size_t lo = std::min(a, bb), hi = std::max(a, bb);
                const double amp = k_[bb] * (a == bb ? rt2 : 1.0);
                kick(single(a, 0), pair_state(lo, hi, 0), amp);
                kick(pair_state(lo, hi, 0), single(a, 0), amp);
            }
        }
    }

    double p_right(const State& psi) const {
        const double c = std::cos(theta_), s = std::sin(theta_);
        double acc = 0.0;
        for (std::size_t i = 0; i < dim_; i += 2)
            acc += std::norm(c * psi[i] + s * psi[i + 1]);
        return acc;
    }
    static double norm(const State& psi) {
        double acc = 0.0;
        for (const auto& z : psi) acc += std::norm(z);
        return std::sqrt(acc);
    }
    double double_occupation(const State& psi) const {
        double acc = 0.0;
        for (std::size_t i = 2 + 2 * n_; i < dim_; ++i) acc += std::norm(psi[i]);
        return acc;
    }

    // Chebyshev propagation over an ascending time grid; samples the chiral
    // population at every grid point.  Aborts if the norm drifts by > 1e-6.
    std::vector<EvolutionSample> evolve(State psi, const std::vector<double>& t_grid,
                                        double expansion_tol = 1e-13) const {
        if (t_grid.empty()) return {};
        for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
            if (!(t_grid[i + 1] >= t_grid[i]))
                throw std::invalid_argument("evolve: time grid must be ascending");
        if (t_grid.front() < 0.0) throw std::invalid_argument("evolve: negative time");

        spectral_bounds();
        const double max_dt = 96.0 / std::max(lambda_max_ - lambda_min_, 1e-300);
        std::vector<EvolutionSample> out;
        out.reserve(t_grid.size());
        double now = 0.0;
        for (double t : t_grid) {
            while (t - now > max_dt) {
                step(psi, max_dt, expansion_tol);
                now += max_dt;
            }
            if (t > now) {
                step(psi, t - now, expansion_tol);
                now = t;
            }
            EvolutionSample s;
            s.t = t;
            s.p_right = p_right(psi);
            s.norm = norm(psi);
            s.double_occupation = double_occupation(psi);
            if (std::abs(s.norm - 1.0) > 1e-6)
                throw std::runtime_error("evolve: norm drift " +
                                         std::to_string(std::abs(s.norm - 1.0)) + " at t = " +
                                         std::to_string(t));
            out.push_back(s);
        }
        return out;
    }

private:
    void spectral_bounds() const {
        if (bounds_ready_) return;
        double dmin = diag_[0], dmax = diag_[0];
        for (double d : diag_) {
            dmin = std::min(dmin, d);
            dmax = std::max(dmax, d);
        }
        double ksum = 0.0, kmax = 0.0;
        for (double k : k_) {
            ksum += k;
            kmax = std::max(kmax, k);
        }
        const double srow = std::abs(c2_) + std::abs(s2_);
        const double radius = srow * (std::numbers::sqrt2 * ksum + 2.0 * kmax);
        lambda_min_ = dmin - radius;
        lambda_max_ = dmax + radius;
        bounds_ready_ = true;
    }

    void step(State& psi, double dt, double tol) const {
        const double center = 0.5 * (lambda_max_ + lambda_min_);
        const double radius = 0.5 * (lambda_max_ - lambda_min_);
        const double z = radius * dt;

        State tk_prev = psi; // T_0 psi
        State tk(dim_);      // T_1 psi
        State work(dim_);
        auto scaled_apply = [&](const State& x, State& y) {
            apply(x, y);
            for (std::size_t i = 0; i < dim_; ++i) y[i] = (y[i] - center * x[i]) / radius;
        };
        scaled_apply(tk_prev, tk);

        const std::complex<double> i{0.0, 1.0};
        State acc(dim_);
        double j0 = std::cyl_bessel_j(0, z);
        for (std::size_t ii = 0; ii < dim_; ++ii) acc[ii] = j0 * tk_prev[ii];
        std::complex<double> c1 = 2.0 * (-i) * std::cyl_bessel_j(1, z);
        for (std::size_t ii = 0; ii < dim_; ++ii) acc[ii] += c1 * tk[ii];

        std::complex<double> phase_pow = -i; // (-i)^k tracker
        int quiet = 0;
        const int k_max = static_cast<int>(z + 60.0 + 12.0 * std::cbrt(z + 1.0));
        for (int k = 2; k <= k_max; ++k) {
            scaled_apply(tk, work);
            for (std::size_t ii = 0; ii < dim_; ++ii) {
                const std::complex<double> next = 2.0 * work[ii] - tk_prev[ii];
                tk_prev[ii] = tk[ii];
                tk[ii] = next;
            }
            const double jk = std::cyl_bessel_j(k, z);
            phase_pow *= -i;
            const std::complex<double> ck = 2.0 * phase_pow * jk;
            for (std::size_t ii = 0; ii < dim_; ++ii) acc[ii] += ck * tk[ii];
            quiet = std::abs(jk) < tol ? quiet + 1 : 0;
            if (quiet >= 3) break;
        }
        const std::complex<double> phase = std::exp(-i * center * dt);
        for (std::size_t ii = 0; ii < dim_; ++ii) psi[ii] = phase * acc[ii];
    }

    MoleculeParams mol_;
    DiscreteBath bath_;
    std::size_t n_{0};
    std::size_t dim_{0};
    double c2_{0.0}, s2_{1.0}, theta_{0.0};
    double counterterm_{0.0};
    std::vector<double> k_;
    std::vector<double> diag_;
    mutable bool bounds_ready_{false};
    mutable double lambda_min_{0.0}, lambda_max_{0.0};
};

} // namespace chiraldyn
