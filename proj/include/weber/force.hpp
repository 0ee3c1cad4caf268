#pragma once

#include <array>
#include <string_view>

#include "weber/beam.hpp"
#include "weber/units.hpp"

namespace weber {

using Vec3 = std::array<double, 3>;

// Dipole element mu (e_x +- i e_y) / sqrt(2).
enum class DipoleBranch { plus, minus };
// as_printed: (1 - p') / p' Gamma; standard: (1 + p') / p' Gamma.
enum class ForceDenominator { as_printed, standard };

DipoleBranch parse_branch(std::string_view name);
ForceDenominator parse_denominator(std::string_view name);
std::string_view to_string(DipoleBranch b);
std::string_view to_string(ForceDenominator d);

// Everything the force needs besides the field, in natural units
// (length lambda, time 1/Gamma, mass m_atom).
struct ForceModel {
    double coupling_constant = 0.0;  // g in units of Gamma per unit shape field
    double detuning = 0.0;           // delta omega / Gamma
    double hbar = 0.0;               // hbar / (m lambda^2 Gamma)
    double kz = 0.0;
    DipoleBranch branch = DipoleBranch::plus;
    ForceDenominator denominator = ForceDenominator::as_printed;
    double p_floor = 0.0;    // zero-force sentinel below this saturation
    double den_floor = 1e-12;

    // Requires spec.amplitude_scale to be calibrated.
    static ForceModel make(const BeamSpec& spec, const PhysicalSetup& setup,
                           DipoleBranch branch = DipoleBranch::plus,
                           ForceDenominator denominator = ForceDenominator::as_printed);
    // Saturation parameter of a point at the calibrated peak irradiance.
    double peak_saturation(const BeamSpec& spec, const PhysicalSetup& setup) const;
};

// Relative sentinel threshold: p_floor = sentinel_ratio * peak saturation.
inline constexpr double sentinel_ratio = 1e-12;

struct CouplingSample {
    cplx g;                        // units of Gamma
    std::array<cplx, 3> grad_g{};  // units of Gamma / lambda
    Vec3 alpha{};
    Vec3 beta{};
    double p = 0.0;
    double d_pop = 1.0;
    double p_prime = 0.0;
    cplx gamma_prime;
    bool sentinel = false;  // |g| below threshold; alpha and beta are not defined
};

// g and its gradient from the scalar field at (x, y, z), traveling factor
// exp(i kz z) included, time factor dropped.
std::array<cplx, 4> coupling_and_gradient(const ForceModel& model, const BeamSpec& spec,
                                          const CartesianDerivs& d, double z);

// Direct evaluation of g at a parabolic point (z = 0), units of Gamma.
// Throws std::domain_error at the origin where h = 0.
cplx coupling_g(const BeamSpec& spec, const PhysicalSetup& setup, ParabolicPoint p,
                DipoleBranch branch = DipoleBranch::plus);

// Fills alpha + i beta = grad g / g, p, D and, for the given velocity, p' and gamma'.
CouplingSample log_gradient(const ForceModel& model, const std::array<cplx, 4>& g_and_grad, const Vec3& velocity);

struct ForceResult {
    Vec3 force{};  // m lambda Gamma^2, numerically equal to the acceleration
    bool sentinel = false;
};

ForceResult mean_force(const CouplingSample& sample, const Vec3& velocity, const ForceModel& model);

}  // namespace weber
