// Unit system, double well and isolated two-level dynamics.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "chiraldyn/molecule.hpp"
#include "chiraldyn/units.hpp"

using namespace chiraldyn;
using Catch::Approx;

TEST_CASE("characteristic scales") {
    UnitSystem u; // defaults: M = 1e-27 kg, U0 = 1e-19 J, R0 = 1e-10 m
    CHECK(u.tau0() == Approx(1e-14));
    CHECK(u.momentum0() == Approx(1e-23));
    CHECK(u.reduced_planck() == Approx(0.105).epsilon(0.01));
    // h * U0 * tau0 recovers hbar to round-off
    CHECK(u.reduced_planck() * u.energy * u.tau0() ==
          Approx(constants::hbar).epsilon(1e-14));
    CHECK(u.tau0() > 0.0);
    CHECK(u.momentum0() > 0.0);

    UnitSystem bad = u;
    bad.energy = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("quartic double well") {
    PotentialParams p;
    p.asymmetry = 0.0;
    CHECK(potential_value(0.0, p) == 0.0);
    CHECK(potential_value(1.0, p) == -1.0);
    CHECK(potential_value(-1.0, p) == -1.0);
    p.asymmetry = 0.1;
    CHECK(potential_value(1.0, p) == Approx(-1.1));
}

TEST_CASE("two-level reduction") {
    UnitSystem u;
    const auto m = derive_two_level(1e13, 0.5, u);
    // Delta = h Omega tau0 / 4 with Omega tau0 = 0.1
    CHECK(m.tunneling == Approx(u.reduced_planck() * 0.1 / 4.0));
    CHECK(m.tunneling > 1e-3);
    CHECK(m.tunneling < 1e-2); // the published scale is 1e-3
    // delta = eta sqrt(h / (2 Omega tau0)) ~ 0.72 eta
    CHECK(m.localization ==
          Approx(0.5 * std::sqrt(u.reduced_planck() / 0.2)));
    CHECK(derive_two_level(1e13, 0.0, u).localization == 0.0);
    CHECK_THROWS_AS(derive_two_level(-1e13, 0.0, u), std::invalid_argument);
    CHECK_THROWS_AS(derive_two_level(0.0, 0.0, u), std::invalid_argument);

    CHECK(two_level_valid(1e13, u, 1e-3));
    CHECK_FALSE(two_level_valid(1e13, u, 0.5)); // thermal energy reaches the gap scale
}

TEST_CASE("mixing angle branch keeps level 1 the ground state") {
    MoleculeParams m;
    m.tunneling = 1e-3;

    m.localization = 0.0;
    CHECK(m.mixing_angle() == Approx(std::numbers::pi / 4.0));

    for (double d : {1e-3, -1e-3, 5e-5, -5e-5}) {
        m.localization = d;
        const double th = m.mixing_angle();
        const double c = std::cos(th), s = std::sin(th);
        // eigenvector (c, s) in the (R, L) basis of H = -Delta sx - delta sz
        const double hv_r = -d * c - m.tunneling * s;
        const double hv_l = -m.tunneling * c + d * s;
        CHECK(hv_r == Approx(-m.gap() * c).margin(1e-18));
        CHECK(hv_l == Approx(-m.gap() * s).margin(1e-18));
        // sigma matrix elements
        CHECK(m.sigma_offdiag() == Approx(std::sin(2.0 * th)));
        CHECK(m.sigma_diag() == Approx(std::cos(2.0 * th)));
        const double s2 = m.sigma_offdiag(), c2 = m.sigma_diag();
        CHECK(s2 * s2 + c2 * c2 == Approx(1.0));
    }
    CHECK(m.energy(1) == Approx(-0.5 * m.gap()));
    CHECK(m.energy(2) == Approx(0.5 * m.gap()));

    m.tunneling = -1.0;
    CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}

TEST_CASE("isolated tunneling probability") {
    MoleculeParams m;
    m.tunneling = 1e-3;
    m.localization = 0.0;
    CHECK(isolated_tunneling_probability(m, 0.0) == 0.0);
    CHECK(isolated_tunneling_probability(m, std::numbers::pi / m.tunneling) ==
          Approx(1.0).margin(1e-12));

    m.localization = m.tunneling; // amplitude exactly 1/2
    CHECK(isolated_amplitude(m) == Approx(0.5));
    double peak = 0.0;
    for (int i = 0; i < 4000; ++i)
        peak = std::max(peak, isolated_tunneling_probability(m, i * 2.0));
    CHECK(peak == Approx(0.5).margin(1e-4));
}

TEST_CASE("probability bounded and periodic") {
    MoleculeParams m;
    m.tunneling = 1e-3;
    m.localization = 3e-4;
    const double period = isolated_period(m);
    for (int i = 0; i < 500; ++i) {
        const double t = 37.0 * i;
        const double p = isolated_tunneling_probability(m, t);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(isolated_tunneling_probability(m, t + period) == Approx(p).margin(1e-9));
    }
}

TEST_CASE("asymmetry suppresses the envelope") {
    // amplitude is even in the localization strength and strictly decreasing
    // in its magnitude
    MoleculeParams m;
    m.tunneling = 1e-3;
    double prev = 2.0;
    for (int i = 0; i <= 20; ++i) {
        const double eta = 1e-4 * std::pow(100.0, i / 20.0);
        m.localization = eta;
        const double amp = isolated_amplitude(m);
        CHECK(amp < prev);
        m.localization = -eta;
        CHECK(isolated_amplitude(m) == Approx(amp));
        prev = amp;
    }
}
