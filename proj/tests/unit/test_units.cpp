#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "weber/units.hpp"

using namespace weber;

TEST_CASE("detuning of the 862 nm laser from the 795 nm line")
{
    PhysicalSetup s;
    // 2 pi c (1/862 nm - 1/795 nm), by hand in long double.
    long double want = 2.0L * 3.14159265358979323846L * 299792458.0L * (1.0L / 862e-9L - 1.0L / 795e-9L);
    CHECK(detuning(s) == doctest::Approx(static_cast<double>(want)).epsilon(1e-13));
    CHECK(detuning(s) == doctest::Approx(-1.84e14).epsilon(0.005));
    CHECK(detuning_natural(s) == doctest::Approx(-4.98e6).epsilon(0.002));

    PhysicalSetup res = s;
    res.laser_wavelength = res.transition_wavelength;
    CHECK(detuning(res) == 0.0);

    PhysicalSetup blue = s;
    blue.laser_wavelength = 790e-9;
    CHECK(detuning(blue) > 0.0);
    CHECK_FALSE(blue.warnings().empty());
    CHECK(s.warnings().empty());
}

TEST_CASE("natural units")
{
    PhysicalSetup s;
    CHECK(s.to_natural(862e-9, Quantity::length) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.gravity_natural() == doctest::Approx(9.80665 / (862e-9 * 3.7e7 * 3.7e7)).epsilon(1e-14));
    CHECK(s.gravity_natural() == doctest::Approx(8.3e-9).epsilon(0.01));
    CHECK(s.from_natural(0.6e-3, Quantity::velocity) == doctest::Approx(0.019).epsilon(0.01));
    CHECK(s.kinetic_microkelvin(0.6e-3) == doctest::Approx(1.85).epsilon(0.02));
    double v15 = s.speed_for_microkelvin(1.5);
    CHECK(v15 >= 0.5e-3);
    CHECK(v15 <= 0.7e-3);
    CHECK(s.kinetic_microkelvin(v15) == doctest::Approx(1.5).epsilon(1e-12));

    // velocity / time = acceleration
    CHECK(s.unit_of(Quantity::velocity) / s.unit_of(Quantity::time) ==
          doctest::Approx(s.unit_of(Quantity::acceleration)).epsilon(1e-15));
    CHECK(s.unit_of(Quantity::force) == doctest::Approx(s.atom_mass * s.unit_of(Quantity::acceleration)).epsilon(1e-15));

    for (Quantity q : {Quantity::length, Quantity::time, Quantity::velocity, Quantity::acceleration, Quantity::energy,
                       Quantity::force}) {
        for (double v : {1e-30, 3.7, 2.2e12}) {
            CHECK(s.from_natural(s.to_natural(v, q), q) == doctest::Approx(v).epsilon(1e-12));
        }
        CHECK(parse_quantity(to_string(q)) == q);
    }
    CHECK_THROWS_AS(parse_quantity("charge"), std::invalid_argument);
}

TEST_CASE("dipole moment and decay rate are inverse")
{
    PhysicalSetup s;
    double mu = dipole_moment(s);
    CHECK(std::isfinite(mu));
    CHECK(mu > 0.0);
    CHECK(decay_rate_from_dipole(s, mu) == doctest::Approx(s.gamma).epsilon(1e-12));
    // Rb D1 reduced element is a few 1e-29 C m.
    CHECK(mu > 1e-29);
    CHECK(mu < 5e-29);

    PhysicalSetup half = s;
    half.transition_wavelength *= 0.5;  // k doubled
    CHECK(dipole_moment(half) / mu == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));
}

TEST_CASE("setup validation")
{
    PhysicalSetup s;
    CHECK_NOTHROW(s.validate());
    s.gamma = -1.0;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.gamma = 3.7e7;
    s.atom_mass = std::nan("");
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
