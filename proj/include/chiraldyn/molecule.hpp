// molecule.hpp — Quartic double well, two-level reduction and isolated dynamics

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chiraldyn/units.hpp"

namespace chiraldyn {

struct PotentialParams {
    double asymmetry{0.0};          // eta, dimensionless tilt of the two wells
    double well_frequency{1e13};    // rad/s, harmonic frequency at each minimum
};

// U(x)/U0 for x = R/R0.  Minima near x = +-1, barrier at x ~ 0.
inline double potential_value(double x, const PotentialParams& p) {
    const double q = x * x - 1.0;
    return q * q - 1.0 - p.asymmetry * x;
}

// Two-level system in the chiral basis {|L>, |R>}, H = -tunneling*sigma_x - localization*sigma_z
// with sigma_z = |R><R| - |L><L|.  Energy eigenstates:
//   |1> = cos(theta)|R> + sin(theta)|L>,  |2> = sin(theta)|R> - cos(theta)|L>,
// energies -+ gap/2.  The mixing angle is theta = atan2(tunneling, localization)/2, which keeps
// |1> the ground state for either sign of the localization strength and gives theta = pi/4 at
// zero asymmetry.
struct MoleculeParams {
    double tunneling{1e-3};      // Delta > 0
    double localization{0.0};    // delta, signed
    double planck{0.1};          // reduced Planck constant of the unit system

    double gap() const { return std::hypot(tunneling, localization); } // Omega_21
    double mixing_angle() const {
        if (tunneling == 0.0 && localization == 0.0) return std::numbers::pi / 4.0;
        return 0.5 * std::atan2(tunneling, localization);
    }
    double sigma_offdiag() const { return tunneling / gap(); }   // <1|sz|2> = sin(2 theta)
    double sigma_diag() const { return localization / gap(); }   // <1|sz|1> = cos(2 theta)
    double energy(int n) const { return (n == 1 ? -0.5 : 0.5) * gap(); }

    void validate() const {
        if (!(tunneling > 0.0))
            throw std::invalid_argument("MoleculeParams: tunneling strength must be positive");
        if (!(planck > 0.0))
            throw std::invalid_argument("MoleculeParams: reduced Planck constant must be positive");
    }
};

// Reduction of the quartic well to the two-level parameters.
//   Delta = h * Omega * tau0 / 4,  delta = eta * sqrt(h / (2 Omega tau0)).
inline MoleculeParams derive_two_level(double well_frequency, double asymmetry,
                                       const UnitSystem& u) {
    if (!(well_frequency > 0.0))
        throw std::invalid_argument("derive_two_level: well frequency must be positive");
    const double h = u.reduced_planck();
    const double wt = well_frequency * u.tau0();
    MoleculeParams m;
    m.planck = h;
    m.tunneling = h * wt / 4.0;
    m.localization = asymmetry * std::sqrt(h / (2.0 * wt));
    return m;
}

// Two-level confinement requires E_th << Omega tau0 h << 1.
inline bool two_level_valid(double well_frequency, const UnitSystem& u, double thermal_energy) {
    const double scale = well_frequency * u.tau0() * u.reduced_planck();
    return thermal_energy < scale && scale < 1.0;
}

// Isolated-molecule probability of finding |R> at time t starting from |L>:
//   P = sin^2(2 theta) * sin^2(gap * t / 2),  amplitude Delta^2/(Delta^2+delta^2).
inline double isolated_tunneling_probability(const MoleculeParams& m, double t) {
    const double s = m.sigma_offdiag();
    const double osc = std::sin(0.5 * m.gap() * t);
    return s * s * osc * osc;
}

inline double isolated_amplitude(const MoleculeParams& m) {
    const double s = m.sigma_offdiag();
    return s * s;
}

inline double isolated_period(const MoleculeParams& m) {
    return 2.0 * std::numbers::pi / m.gap();
}

} // namespace chiraldyn
