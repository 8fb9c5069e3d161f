// dynamics.hpp — Second-order evolution of the open two-level molecule
//
// Starting from |psi0>|vac> the interaction-picture propagator keeps the
// vacuum amplitude per level plus one-quantum emission amplitudes.  With
// s2 = sin(2 theta), W = gap and J the bath spectral density:
//
//   decay rate      G2   = (2/h) s2^2 J(W)
//   level shifts    dE_n = (1/pi) s2^2 W_rn PV int J/(w (w + W_rn)) dw
//   phase integrals phi_n(t) = (s2^2/(pi h)) PV int J sin((w -+ W)t)/(w -+ W)^2 dw
//   emitted weight  g1(t) = (2 s2^2/(pi h)) int J (1-cos((w-W)t))/(w-W)^2 dw -> G2 t
//   virtual weight  g2(t) = same kernel at -W (bounded)
//
// Vacuum amplitudes are resummed, u_n = exp(-i dE_n t/h) exp(-g/2) exp(-i phi),
// so populations stay bounded at long times and P1 + P2 = 1 holds exactly.
// The right-handed probability follows from the chi overlaps,
//   P_R = cos^2(th) P1 + sin^2(th) P2 + sin(2 th) Re<chi1|chi2>.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "chiraldyn/molecule.hpp"
#include "chiraldyn/quadrature.hpp"
#include "chiraldyn/spectral.hpp"

namespace chiraldyn {

struct PerturbativeInputs {
    MoleculeParams molecule;
    SpectralDensity bath{SpectralDensity::null_bath()};
    std::complex<double> initial_level1{0.0, 0.0}; // <1|psi0>
    std::complex<double> initial_level2{0.0, 0.0}; // <2|psi0>
    double rel_tol{quad::default_rel_tol};
    bool include_cross_term{true};

    static PerturbativeInputs left_start(const MoleculeParams& m, SpectralDensity j,
                                         double tol = quad::default_rel_tol) {
        m.validate();
        PerturbativeInputs in{m, std::move(j)};
        const double th = m.mixing_angle();
        in.initial_level1 = std::sin(th);
        in.initial_level2 = -std::cos(th);
        in.rel_tol = tol;
        return in;
    }
    static PerturbativeInputs right_start(const MoleculeParams& m, SpectralDensity j,
                                          double tol = quad::default_rel_tol) {
        m.validate();
        PerturbativeInputs in{m, std::move(j)};
        const double th = m.mixing_angle();
        in.initial_level1 = std::cos(th);
        in.initial_level2 = std::sin(th);
        in.rel_tol = tol;
        return in;
    }
    static PerturbativeInputs eigenbasis_start(const MoleculeParams& m, SpectralDensity j,
                                               std::complex<double> a1, std::complex<double> a2,
                                               double tol = quad::default_rel_tol) {
        m.validate();
        const double n = std::sqrt(std::norm(a1) + std::norm(a2));
        if (!(n > 0.0)) throw std::invalid_argument("initial state must be non-zero");
        PerturbativeInputs in{m, std::move(j)};
        in.initial_level1 = a1 / n;
        in.initial_level2 = a2 / n;
        in.rel_tol = tol;
        return in;
    }
};

struct PropagatorElements {
    std::complex<double> u_vac_11{1.0, 0.0};
    std::complex<double> u_vac_22{1.0, 0.0};
    double gamma2{0.0};
    double shift1{0.0};
    double shift2{0.0};
    double emitted_weight{0.0}; // g1(t)
    double virtual_weight{0.0}; // g2(t)
};

struct ChiOverlaps {
    double p1{0.0};
    double p2{0.0};
    std::complex<double> coherence{0.0, 0.0}; // <chi1|chi2>
    double phase_shift{0.0};                  // zeta of the closed form
};

struct ProbabilityPoint {
    double value{0.0}; // clipped to [0, 1]
    double raw{0.0};
    bool clipped{false};
};

enum class TemporalWindow { below, within, beyond }; // relative to (1/W, 1/G2)

class PerturbativeEvolution {
public:
    explicit PerturbativeEvolution(PerturbativeInputs in) : in_(std::move(in)) {
        in_.molecule.validate();
        const auto& m = in_.molecule;
        gap_ = m.gap();
        s2_ = m.sigma_offdiag();
        h_ = m.planck;
        if (!in_.bath.is_null()) {
            const auto& j = in_.bath;
            gamma2_ = (2.0 / h_) * s2_ * s2_ * j.value(gap_);
            const double wmax0 = j.domain_max(gap_, 0.0);
            shift1_ = (s2_ * s2_ / std::numbers::pi) * gap_ *
                      quad::shift_integral(j, gap_, wmax0, in_.rel_tol).value;
            shift2_ = -(s2_ * s2_ / std::numbers::pi) * gap_ *
                      quad::shift_integral(j, -gap_, wmax0, in_.rel_tol).value;
            cross_const_ = quad::inverse_quadratic_integral(j, gap_, wmax0, in_.rel_tol).value;
            virtual_weight_limit_ =
                coupling_scale() * 2.0 *
                quad::detail::gk_adaptive(
                    [&](double w) {
                        const double u = w + gap_;
                        return j.value(w) / (u * u);
                    },
                    0.0, wmax0, in_.rel_tol)
                    .value;
            // zeta = (s2^2/h) (J'(W) - J(W)/W)
            zeta_ = (s2_ * s2_ / h_) * (j.derivative(gap_) - j.value(gap_) / gap_);
        }
    }

    const PerturbativeInputs& inputs() const { return in_; }
    double gap() const { return gap_; }
    double gamma2() const { return gamma2_; }
    double shift1() const { return shift1_; }
    double shift2() const { return shift2_; }
    double zeta() const { return zeta_; }
    double renormalized_gap() const { return gap_ + (shift2_ - shift1_) / h_; }
    double weak_coupling_ratio() const { return gamma2_ / gap_; }
    bool weak_coupling_ok() const { return weak_coupling_ratio() < 0.1; }
    TemporalWindow temporal_window(double t) const {
        if (t * gap_ < 1.0) return TemporalWindow::below;
        if (gamma2_ > 0.0 && t * gamma2_ > 1.0) return TemporalWindow::beyond;
        return TemporalWindow::within;
    }

    PropagatorElements propagator(double t) const {
        check_time(t);
        PropagatorElements el;
        el.gamma2 = gamma2_;
        el.shift1 = shift1_;
        el.shift2 = shift2_;
        if (in_.bath.is_null() || t == 0.0) return el;

        const auto [g1, g2, phi1, phi2] = vac_integrals(t);
        el.emitted_weight = g1;
        el.virtual_weight = g2;
        const std::complex<double> i{0.0, 1.0};
        el.u_vac_11 = std::exp(-i * (shift1_ * t / h_ + phi1) - 0.5 * g2);
        el.u_vac_22 = std::exp(-i * (shift2_ * t / h_ + phi2) - 0.5 * g1);
        return el;
    }

    ChiOverlaps chi_overlaps(double t) const {
        check_time(t);
        ChiOverlaps chi;
        chi.phase_shift = zeta_;
        const std::complex<double> a = in_.initial_level1;
        const std::complex<double> b = in_.initial_level2;
        const std::complex<double> i{0.0, 1.0};

        if (in_.bath.is_null() || t == 0.0) {
            chi.p1 = std::norm(a);
            chi.p2 = std::norm(b);
            chi.coherence = std::conj(a) * b * std::exp(-i * gap_ * t);
            return chi;
        }

        const auto [g1, g2, phi1, phi2] = vac_integrals(t);
        const double e1 = std::exp(-g1);
        const double e2 = std::exp(-g2);
        chi.p1 = std::norm(a) * e2 + std::norm(b) * (1.0 - e1);
        chi.p2 = std::norm(b) * e1 + std::norm(a) * (1.0 - e2);

        const double dress = std::exp(-0.5 * (g1 + g2));
        const double phase = (gap_ + (shift2_ - shift1_) / h_) * t + (phi2 - phi1);
        chi.coherence = std::conj(a) * b * dress * std::exp(-i * phase);
        if (in_.include_cross_term) {
            const double E = quad::cos_over_quadratic_integral(
                                 in_.bath, gap_, t, in_.bath.domain_max(gap_, t), in_.rel_tol)
                                 .value;
            const double Y = 0.5 * (std::cos(gap_ * t) * cross_const_ - E);
            chi.coherence += std::conj(b) * a * (4.0 * coupling_scale() * Y) * dress;
        }
        return chi;
    }

    ProbabilityPoint p_right_point(double t) const {
        const ChiOverlaps chi = chi_overlaps(t);
        const double th = in_.molecule.mixing_angle();
        const double c = std::cos(th), s = std::sin(th);
        ProbabilityPoint p;
        p.raw = c * c * chi.p1 + s * s * chi.p2 + s2_ * chi.coherence.real();
        p.value = std::clamp(p.raw, 0.0, 1.0);
        p.clipped = p.raw != p.value;
        return p;
    }
    double p_right_general(double t) const { return p_right_point(t).value; }

    // Weak-coupling closed form, valid for 1/W << t << 1/G2 and a left start.
    double p_right_dilute_closed_form(double t) const {
        check_time(t);
        const double th = in_.molecule.mixing_angle();
        const double c2th = std::cos(th) * std::cos(th);
        const double s2th = std::sin(th) * std::sin(th);
        const double decay = std::exp(-gamma2_ * t);
        const double p1 = s2th + c2th * (1.0 - decay);
        const double p2 = c2th * decay;
        const double osc = std::cos(renormalized_gap() * t + zeta_);
        return c2th * p1 + s2th * p2 - 0.5 * s2_ * s2_ * std::exp(-0.5 * gamma2_ * t) * osc;
    }

    // Long-time limit of the chosen path (time average when nothing decays).
    double equilibrium_p_right(bool closed_form = false) const {
        const double th = in_.molecule.mixing_angle();
        const double c2th = std::cos(th) * std::cos(th);
        const double s2th = std::sin(th) * std::sin(th);
        if (closed_form) return c2th;
        const double na = std::norm(in_.initial_level1);
        const double nb = std::norm(in_.initial_level2);
        if (in_.bath.is_null() || gamma2_ <= 0.0)
            return c2th * na + s2th * nb; // oscillation mean, nothing relaxes
        const double e2 = std::exp(-virtual_weight_limit_);
        const double p1 = na * e2 + nb;
        const double p2 = na * (1.0 - e2);
        return c2th * p1 + s2th * p2;
    }

    double virtual_weight_limit() const { return virtual_weight_limit_; }
    double coupling_scale() const { return s2_ * s2_ / (std::numbers::pi * h_); }

private:
    struct VacIntegrals {
        double g1, g2, phi1, phi2;
    };
    VacIntegrals vac_integrals(double t) const {
        const auto& j = in_.bath;
        const double tol = in_.rel_tol;
        const double k = coupling_scale();
        const double wp = j.domain_max(gap_, t);
        const double wm = j.domain_max(-gap_, t);
        VacIntegrals v;
        v.g1 = 2.0 * k * quad::sinc_squared_integral(j, gap_, t, wp, tol).value;
        v.g2 = 2.0 * k * quad::sinc_squared_integral(j, -gap_, t, wm, tol).value;
        v.phi2 = k * quad::sine_over_square_integral(j, gap_, t, wp, tol).value;
        v.phi1 = k * quad::sine_over_square_integral(j, -gap_, t, wm, tol).value;
        return v;
    }
    static void check_time(double t) {
        if (t < 0.0) throw std::invalid_argument("evolution time must be >= 0");
    }

    PerturbativeInputs in_;
    double gap_{0.0};
    double s2_{0.0};
    double h_{0.1};
    double gamma2_{0.0};
    double shift1_{0.0};
    double shift2_{0.0};
    double zeta_{0.0};
    double cross_const_{0.0};          // PV int J/(w^2 - W^2)
    double virtual_weight_limit_{0.0}; // g2(t -> infinity), Cesaro mean
};

// ---- single-shot operation wrappers -----------------------------------------

inline double energy_shift(int n, const PerturbativeInputs& in) {
    if (n != 1 && n != 2) throw std::invalid_argument("energy_shift: level index must be 1 or 2");
    PerturbativeEvolution ev(in);
    return n == 1 ? ev.shift1() : ev.shift2();
}

inline double decay_rate(int n, const PerturbativeInputs& in) {
    if (n != 1 && n != 2) throw std::invalid_argument("decay_rate: level index must be 1 or 2");
    if (n == 1) return 0.0; // no level below the ground state at zero temperature
    const auto& m = in.molecule;
    const double s2 = m.sigma_offdiag();
    return (2.0 / m.planck) * s2 * s2 * in.bath.value(m.gap());
}

inline std::complex<double> u_vac_diagonal(int n, double t, const PerturbativeInputs& in) {
    if (n != 1 && n != 2) throw std::invalid_argument("u_vac_diagonal: level index must be 1 or 2");
    PerturbativeEvolution ev(in);
    const auto el = ev.propagator(t);
    return n == 1 ? el.u_vac_11 : el.u_vac_22;
}

// Continuous-frequency emission amplitude density: |element|^2 integrates over
// w to the one-quantum weight.  Diagonal elements vanish in the Delta >> delta
// reduction.
inline std::complex<double> u_alpha_element(int m, int n, double w, double t,
                                            const PerturbativeInputs& in) {
    if ((m != 1 && m != 2) || (n != 1 && n != 2))
        throw std::invalid_argument("u_alpha_element: level indices must be 1 or 2");
    if (!(w > 0.0)) throw std::invalid_argument("u_alpha_element: frequency must be positive");
    if (m == n) return {0.0, 0.0};
    const auto& mol = in.molecule;
    const double Wmn = (m == 2 ? mol.gap() : -mol.gap());
    const double x = w + Wmn;
    const double s2 = mol.sigma_offdiag();
    const double amp = std::sqrt(in.bath.value(w) / (std::numbers::pi * mol.planck)) * s2;
    const std::complex<double> i{0.0, 1.0};
    return i * amp * t * quad::detail::sinc(0.5 * x * t) * std::exp(i * (0.5 * x * t));
}

inline ChiOverlaps chi_overlaps(double t, const PerturbativeInputs& in) {
    return PerturbativeEvolution(in).chi_overlaps(t);
}

inline double p_right_general(double t, const PerturbativeInputs& in) {
    return PerturbativeEvolution(in).p_right_general(t);
}

inline double p_right_dilute_closed_form(double t, const PerturbativeInputs& in) {
    return PerturbativeEvolution(in).p_right_dilute_closed_form(t);
}

} // namespace chiraldyn
