#include "weber/units.hpp"

#include <cmath>
#include <stdexcept>

namespace weber {

Quantity parse_quantity(std::string_view name)
{
    if (name == "length") return Quantity::length;
    if (name == "time") return Quantity::time;
    if (name == "velocity") return Quantity::velocity;
    if (name == "acceleration") return Quantity::acceleration;
    if (name == "energy") return Quantity::energy;
    if (name == "force") return Quantity::force;
    throw std::invalid_argument("unknown quantity kind '" + std::string(name) + "'");
}

std::string_view to_string(Quantity q)
{
    switch (q) {
    case Quantity::length: return "length";
    case Quantity::time: return "time";
    case Quantity::velocity: return "velocity";
    case Quantity::acceleration: return "acceleration";
    case Quantity::energy: return "energy";
    case Quantity::force: return "force";
    }
    return "?";
}

void PhysicalSetup::validate() const
{
    auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0))
            throw std::invalid_argument(std::string("setup.") + name + " must be positive and finite");
    };
    positive(transition_wavelength, "transition_wavelength");
    positive(laser_wavelength, "laser_wavelength");
    positive(gamma, "gamma");
    positive(atom_mass, "atom_mass");
    positive(gravity, "gravity");
}

std::vector<std::string> PhysicalSetup::warnings() const
{
    std::vector<std::string> out;
    if (laser_wavelength < transition_wavelength)
        out.emplace_back("laser is blue detuned: atoms are repelled from bright regions");
    else if (laser_wavelength == transition_wavelength)
        out.emplace_back("laser is on resonance: the far-detuned picture does not apply");
    return out;
}

double PhysicalSetup::unit_of(Quantity q) const
{
    switch (q) {
    case Quantity::length: return length_unit();
    case Quantity::time: return time_unit();
    case Quantity::velocity: return velocity_unit();
    case Quantity::acceleration: return acceleration_unit();
    case Quantity::energy: return energy_unit();
    case Quantity::force: return force_unit();
    }
    throw std::invalid_argument("unknown quantity kind");
}

double PhysicalSetup::kinetic_microkelvin(double speed_natural) const
{
    double v = speed_natural * velocity_unit();
    return 0.5 * atom_mass * v * v / si::kB * 1e6;
}

double PhysicalSetup::speed_for_microkelvin(double microkelvin) const
{
    return std::sqrt(2.0 * si::kB * microkelvin * 1e-6 / atom_mass) / velocity_unit();
}

double detuning(const PhysicalSetup& setup)
{
    return 2.0 * pi * si::c * (1.0 / setup.laser_wavelength - 1.0 / setup.transition_wavelength);
}

double dipole_moment(const PhysicalSetup& setup)
{
    double k = setup.transition_k();
    return std::sqrt(3.0 * pi * si::eps0 * si::hbar * setup.gamma / (k * k * k));
}

double decay_rate_from_dipole(const PhysicalSetup& setup, double mu)
{
    double k = setup.transition_k();
    return k * k * k * mu * mu / (3.0 * pi * si::eps0 * si::hbar);
}

}  // namespace weber
