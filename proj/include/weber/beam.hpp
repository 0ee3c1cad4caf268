#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "weber/kummer.hpp"
#include "weber/units.hpp"

namespace weber {

enum class Parity { even, odd };

Parity parse_parity(std::string_view name);
std::string_view to_string(Parity p);

// Labels of a monochromatic vector Weber beam. Lengths are in laser
// wavelengths, so k = 2 pi.
struct BeamSpec {
    Parity parity = Parity::odd;
    double order_a = -5.0;
    double kz_fraction = 0.995;  // k_z / k
    cplx amp_te = 1.0;
    cplx amp_tm = 0.0;
    double irradiance = 1.725;     // W/cm^2, peak over the calibration window
    double amplitude_scale = 0.0;  // V/m per unit shape field; set by calibrate_amplitude

    void validate() const;

    static constexpr double k = 2.0 * pi;
    double kz() const { return k * kz_fraction; }
    double kperp() const;
    // n_p of the hypergeometric parameters: 1 for even, 3 for odd.
    int n_p() const { return parity == Parity::even ? 1 : 3; }
    // Per-photon eigenvalue hbar^2 k_perp a, SI (J^2 s^2 / m).
    double photon_a_constant(const PhysicalSetup& setup) const;
};

// Transverse parabolic coordinates: x = (u^2 - v^2)/2, y = u v, v >= 0.
struct ParabolicPoint {
    double u = 0.0;
    double v = 0.0;
    double h() const;
};

struct CartesianPoint {
    double x = 0.0;
    double y = 0.0;
};

ParabolicPoint cart_to_parabolic(double x, double y);
CartesianPoint parabolic_to_cart(ParabolicPoint p);

// One separated factor F(s) = P(s) M(n/4 -+ i a/2, n/2; i k s^2) exp(-i k s^2 / 2)
// together with its first two derivatives. P(s) = 1 (even) or sqrt(k) s (odd).
struct FactorValue {
    cplx f, df, d2f;
};

// Which separated coordinate a factor belongs to. The u factor carries the
// order a, the v factor carries -a.
enum class Axis { u, v };

double factor_order(const BeamSpec& spec, Axis axis);
FactorValue transverse_factor(const BeamSpec& spec, Axis axis, double s);
// The separated factors obey F'' = -(k^2 s^2 - 2 a_eff k) F, with a_eff
// the factor order; used for second and third derivatives.
double factor_potential(double kperp, double order, double s);

// psi = F_u(u) F_v(v) and its parabolic partials.
struct ScalarSample {
    cplx psi, du, dv, duu, duv, dvv;
};

ScalarSample combine_factors(const FactorValue& fu, const FactorValue& fv);
ScalarSample scalar_psi(const BeamSpec& spec, ParabolicPoint p);

// psi and its Cartesian partials up to second order.
struct CartesianDerivs {
    cplx psi, dx, dy, dxx, dxy, dyy;
};

// Chain rule from (u, v) to (x, y). Singular at u = v = 0.
CartesianDerivs to_cartesian(const ScalarSample& s, ParabolicPoint p);

// Points closer than this to the origin are evaluated at this radius on
// the +x axis, where the parabolic basis is regular.
inline constexpr double origin_guard_radius = 5e-7;

// Source of the scalar transverse field and its Cartesian partials.
class ScalarField {
public:
    virtual ~ScalarField() = default;
    virtual CartesianDerivs at(double x, double y) const = 0;
    virtual const BeamSpec& spec() const = 0;
};

// Direct evaluation through kummer_1f1 on every call.
class DirectField final : public ScalarField {
public:
    explicit DirectField(BeamSpec spec);
    CartesianDerivs at(double x, double y) const override;
    const BeamSpec& spec() const override { return spec_; }

private:
    BeamSpec spec_;
};

struct QuadratureConfig {
    double half_range = 72.0;  // in t = ln|tan(phi/2)|; the weight decays as e^{-|t|/2}
    double initial_step = 0.0; // 0 selects a step from the oscillation bandwidth
    int max_refinements = 6;
    double rel_tol = 1e-11;
};

struct SpectrumValue {
    cplx value;
    double error_estimate = 0.0;
    int nodes = 0;
};

// Angular-spectrum synthesis of the transverse factor, up to a constant.
// Throws std::runtime_error with the achieved estimate on non-convergence.
SpectrumValue scalar_psi_spectrum(const BeamSpec& spec, double x, double y, const QuadratureConfig& quad = {});

// Complex field vectors built from psi with the traveling factor dropped.
// Components are Cartesian; E_shape has units of k^2 psi.
std::array<cplx, 3> e_shape(const BeamSpec& spec, const CartesianDerivs& d);
std::array<cplx, 3> b_shape(const BeamSpec& spec, const CartesianDerivs& d);

struct FieldSample {
    cplx psi, dpsi_du, dpsi_dv;
    std::array<cplx, 3> e_cart{};       // V/m, includes exp(i(kz z - w t))
    std::array<cplx, 3> e_parabolic{};  // (e_u, e_v, e_z) components
    std::array<cplx, 3> b_cart{};       // c B in V/m
    double intensity = 0.0;             // W/cm^2, c eps0 |E|^2 / 2
    bool at_origin = false;             // parabolic basis undefined, Cartesian limit used
};

FieldSample em_fields(const BeamSpec& spec, const PhysicalSetup& setup, ParabolicPoint p, double z, double t);

// Square window centered on the beam axis.
struct Window {
    double x_min = -200.0, x_max = 200.0;
    double y_min = -200.0, y_max = 200.0;
};

// Scale that maps the largest |E_shape|^2 on an n x n grid over the window
// to the target irradiance. Throws std::domain_error if the field vanishes
// everywhere on the grid.
double calibrate_amplitude(const BeamSpec& spec, const ScalarField& field, const Window& window, int n = 512);

struct UmSearch {
    double scan_step = 0.01;
    double scan_max = 12.0;
    double scan_cap = 200.0;
    double resolution = 1e-6;
};

// u of the first maximum of |U~(u)| on the dark side of the beam, i.e. the
// factor with order |a|. Throws std::runtime_error if none is found below
// scan_cap.
double find_um(const BeamSpec& spec, const UmSearch& search = {});

// y = sqrt(2 u_M^2 (|x| - u_M^2 / 2)); empty inside the vertex.
std::optional<double> dark_parabola(double u_m, double x);
// arctan(sqrt(u_M^2/|x0| (1 - u_M^2 / (2|x0|)))); empty if |x0| <= u_M^2 / 2.
std::optional<double> max_deflection_angle(double u_m, double x0);

}  // namespace weber
