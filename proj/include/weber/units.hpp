#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace weber {

// CODATA 2018 exact/recommended values, SI.
namespace si {
inline constexpr double c = 299792458.0;
inline constexpr double hbar = 1.054571817e-34;
inline constexpr double kB = 1.380649e-23;
inline constexpr double eps0 = 8.8541878128e-12;
}  // namespace si

inline constexpr double pi = 3.14159265358979323846;

enum class Quantity { length, time, velocity, acceleration, energy, force };

Quantity parse_quantity(std::string_view name);
std::string_view to_string(Quantity q);

// Species and laser data. Natural units: length = laser wavelength,
// time = 1/gamma, mass = atom mass. Energy is therefore m (lambda gamma)^2.
struct PhysicalSetup {
    double transition_wavelength = 795e-9;  // m, Rb-85 D1
    double laser_wavelength = 862e-9;       // m, 67 nm red of D1
    double gamma = 3.7e7;                   // 1/s, Einstein A of 5P1/2
    double atom_mass = 1.40999e-25;         // kg, Rb-85
    double gravity = 9.80665;               // m/s^2

    // Throws std::invalid_argument if any field is non-positive or non-finite.
    void validate() const;
    // Non-fatal issues, e.g. a blue-detuned laser.
    std::vector<std::string> warnings() const;

    double laser_k() const { return 2.0 * pi / laser_wavelength; }
    double transition_k() const { return 2.0 * pi / transition_wavelength; }

    double length_unit() const { return laser_wavelength; }
    double time_unit() const { return 1.0 / gamma; }
    double velocity_unit() const { return laser_wavelength * gamma; }
    double acceleration_unit() const { return laser_wavelength * gamma * gamma; }
    double energy_unit() const { return atom_mass * velocity_unit() * velocity_unit(); }
    double force_unit() const { return atom_mass * acceleration_unit(); }
    double unit_of(Quantity q) const;

    double to_natural(double value, Quantity q) const { return value / unit_of(q); }
    double from_natural(double value, Quantity q) const { return value * unit_of(q); }

    // hbar expressed in m * lambda^2 * gamma.
    double hbar_natural() const { return si::hbar / (atom_mass * laser_wavelength * laser_wavelength * gamma); }
    double gravity_natural() const { return gravity / acceleration_unit(); }
    // Laser angular frequency in units of gamma.
    double omega_natural() const { return 2.0 * pi * si::c / (laser_wavelength * gamma); }

    // Kinetic temperature 1/2 m v^2 / kB in microkelvin for a natural-unit speed.
    double kinetic_microkelvin(double speed_natural) const;
    // Natural-unit speed whose 1/2 m v^2 / kB equals the given temperature.
    double speed_for_microkelvin(double microkelvin) const;
};

// delta = omega_laser - omega_transition in rad/s. Negative when red detuned.
double detuning(const PhysicalSetup& setup);
inline double detuning_natural(const PhysicalSetup& setup) { return detuning(setup) / setup.gamma; }

// Transition dipole |mu_12| in C m from the spontaneous decay rate.
// Gaussian units give gamma = 4 k^3 |mu|^2 / (3 hbar); in SI the same
// relation reads gamma = k^3 |mu|^2 / (3 pi eps0 hbar), with k the transition
// wavenumber.
double dipole_moment(const PhysicalSetup& setup);
// Inverse of dipole_moment: decay rate implied by a dipole at the transition k.
double decay_rate_from_dipole(const PhysicalSetup& setup, double mu);

}  // namespace weber
