// units.hpp — Dimensionless unit system of the double-well model

#pragma once

#include <cmath>
#include <stdexcept>

namespace chiraldyn {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double epsilon0 = 8.8541878128e-12; // F/m
inline constexpr double debye = 3.33564e-30;         // C m
}

// Characteristic scales of the well: length R0, energy U0, mass M.
// Everything downstream works in these units.
struct UnitSystem {
    double mass{1e-27};     // kg
    double energy{1e-19};   // J, well depth scale U0
    double length{1e-10};   // m, half separation of the minima R0

    double tau0() const { return length / std::sqrt(energy / mass); }        // s
    double momentum0() const { return std::sqrt(mass * energy); }            // kg m/s
    double reduced_planck() const { return constants::hbar / (energy * tau0()); }
    double thermal_energy(double temperature_kelvin) const {
        return constants::k_boltzmann * temperature_kelvin / energy;
    }

    void validate() const {
        if (!(mass > 0.0) || !(energy > 0.0) || !(length > 0.0))
            throw std::invalid_argument("UnitSystem: mass, energy and length must be positive");
    }
};

} // namespace chiraldyn
