#include "weber/beam.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace weber {

Parity parse_parity(std::string_view name)
{
    if (name == "even") return Parity::even;
    if (name == "odd") return Parity::odd;
    throw std::invalid_argument("parity must be 'even' or 'odd', got '" + std::string(name) + "'");
}

std::string_view to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

void BeamSpec::validate() const
{
    if (!(kz_fraction > 0.0 && kz_fraction < 1.0))
        throw std::invalid_argument("beam.kz_fraction must lie in (0, 1)");
    if (!std::isfinite(order_a)) throw std::invalid_argument("beam.order_a must be finite");
    if (!(irradiance >= 0.0) || !std::isfinite(irradiance))
        throw std::invalid_argument("beam.irradiance must be non-negative");
    if (!(std::isfinite(amp_te.real()) && std::isfinite(amp_te.imag()) && std::isfinite(amp_tm.real()) &&
          std::isfinite(amp_tm.imag())))
        throw std::invalid_argument("beam amplitudes must be finite");
}

double BeamSpec::kperp() const { return k * std::sqrt(1.0 - kz_fraction * kz_fraction); }

double BeamSpec::photon_a_constant(const PhysicalSetup& setup) const
{
    return si::hbar * si::hbar * (kperp() / setup.laser_wavelength) * order_a;
}

double ParabolicPoint::h() const { return std::hypot(u, v); }

ParabolicPoint cart_to_parabolic(double x, double y)
{
    double r = std::hypot(x, y);
    double u, v;
    // Take the root without cancellation and recover the other from |y| = u v.
    if (x >= 0.0) {
        u = std::sqrt(r + x);
        v = u > 0.0 ? std::abs(y) / u : 0.0;
    } else {
        v = std::sqrt(r - x);
        u = v > 0.0 ? std::abs(y) / v : 0.0;
    }
    if (y < 0.0) u = -u;
    return {u, v};
}

CartesianPoint parabolic_to_cart(ParabolicPoint p)
{
    return {0.5 * (p.u * p.u - p.v * p.v), p.u * p.v};
}

double factor_order(const BeamSpec& spec, Axis axis) { return axis == Axis::u ? spec.order_a : -spec.order_a; }

double factor_potential(double kperp, double order, double s) { return kperp * kperp * s * s - 2.0 * order * kperp; }

FactorValue transverse_factor(const BeamSpec& spec, Axis axis, double s)
{
    const double kp = spec.kperp();
    const double order = factor_order(spec, axis);
    const double n = spec.n_p();
    const cplx a(n / 4.0, -order / 2.0);
    const cplx b(n / 2.0, 0.0);
    const cplx z(0.0, kp * s * s);

    const cplx m = kummer_1f1(a, b, z);
    const cplx dm = (a / b) * kummer_1f1(a + 1.0, b + 1.0, z) * cplx(0.0, 2.0 * kp * s);
    const cplx e = std::polar(1.0, -0.5 * kp * s * s);
    const cplx de = cplx(0.0, -kp * s) * e;

    double pre = 1.0, dpre = 0.0;
    if (spec.parity == Parity::odd) {
        // (k u^2)^{1/2} continued as an odd function of u.
        pre = std::sqrt(kp) * s;
        dpre = std::sqrt(kp);
    }
    FactorValue out;
    out.f = pre * m * e;
    out.df = dpre * m * e + pre * (dm * e + m * de);
    out.d2f = -factor_potential(kp, order, s) * out.f;
    return out;
}

ScalarSample combine_factors(const FactorValue& fu, const FactorValue& fv)
{
    return {fu.f * fv.f, fu.df * fv.f, fu.f * fv.df, fu.d2f * fv.f, fu.df * fv.df, fu.f * fv.d2f};
}

ScalarSample scalar_psi(const BeamSpec& spec, ParabolicPoint p)
{
    return combine_factors(transverse_factor(spec, Axis::u, p.u), transverse_factor(spec, Axis::v, p.v));
}

CartesianDerivs to_cartesian(const ScalarSample& s, ParabolicPoint p)
{
    const double u = p.u, v = p.v;
    const double h2 = u * u + v * v;
    const cplx px = (u * s.du - v * s.dv) / h2;
    const cplx py = (v * s.du + u * s.dv) / h2;

    const cplx dpx_du = (s.du + u * s.duu - v * s.duv) / h2 - 2.0 * u * px / h2;
    const cplx dpx_dv = (u * s.duv - s.dv - v * s.dvv) / h2 - 2.0 * v * px / h2;
    const cplx dpy_du = (v * s.duu + s.dv + u * s.duv) / h2 - 2.0 * u * py / h2;
    const cplx dpy_dv = (s.du + v * s.duv + u * s.dvv) / h2 - 2.0 * v * py / h2;

    CartesianDerivs d;
    d.psi = s.psi;
    d.dx = px;
    d.dy = py;
    d.dxx = (u * dpx_du - v * dpx_dv) / h2;
    d.dxy = (v * dpx_du + u * dpx_dv) / h2;
    d.dyy = (v * dpy_du + u * dpy_dv) / h2;
    return d;
}

DirectField::DirectField(BeamSpec spec) : spec_(spec) { spec_.validate(); }

CartesianDerivs DirectField::at(double x, double y) const
{
    if (std::hypot(x, y) < origin_guard_radius) {
        x = origin_guard_radius;
        y = 0.0;
    }
    ParabolicPoint p = cart_to_parabolic(x, y);
    return to_cartesian(scalar_psi(spec_, p), p);
}

SpectrumValue scalar_psi_spectrum(const BeamSpec& spec, double x, double y, const QuadratureConfig& quad)
{
    // phi in (0, pi) maps to t = ln tan(phi/2): sin phi = sech t, cos phi = -tanh t,
    // dphi = sech t dt, and the spectrum weight becomes e^{iat} sqrt(sech t) / (2 sqrt(pi)).
    // phi in (-pi, 0) is the mirror image with sin phi -> -sin phi.
    const double kp = spec.kperp();
    const double a = spec.order_a;
    const bool odd = spec.parity == Parity::odd;
    const double norm = 0.5 / std::sqrt(pi);

    auto integrand = [&](double t) {
        double sech = 1.0 / std::cosh(t);
        double w = norm * std::sqrt(sech);
        double along = -kp * x * std::tanh(t);
        double across = kp * y * sech;
        cplx weight = std::polar(w, a * t);
        cplx upper = weight * std::polar(1.0, along + across);
        cplx lower = weight * std::polar(1.0, along - across);
        if (!odd) return upper + lower;
        return cplx(0.0, -1.0) * upper + cplx(0.0, 1.0) * lower;
    };

    double step = quad.initial_step;
    if (step <= 0.0) step = std::min(0.1, 0.8 / (kp * std::hypot(x, y) + std::abs(a) + 1.0));
    const double range = quad.half_range;

    long count = static_cast<long>(std::ceil(range / step));
    cplx sum = 0.0;
    for (long i = -count; i <= count; ++i) sum += integrand(i * step);
    cplx estimate = sum * step;
    int nodes = static_cast<int>(2 * count + 1);

    double err = INFINITY;
    for (int level = 0; level < quad.max_refinements; ++level) {
        cplx mid = 0.0;
        for (long i = -count; i < count; ++i) mid += integrand((i + 0.5) * step);
        nodes += static_cast<int>(2 * count);
        cplx refined = 0.5 * estimate + 0.5 * step * mid;
        err = std::abs(refined - estimate);
        estimate = refined;
        step *= 0.5;
        count *= 2;
        if (err <= quad.rel_tol * (std::abs(estimate) + 1e-6)) return {estimate, err, nodes};
    }
    throw std::runtime_error("scalar_psi_spectrum: quadrature did not converge, error estimate " +
                             std::to_string(err));
}

std::array<cplx, 3> e_shape(const BeamSpec& spec, const CartesianDerivs& d)
{
    const double k = BeamSpec::k, kz = spec.kz(), kp = spec.kperp();
    const cplx te = k * k * spec.amp_te;
    const cplx tm = k * kz * spec.amp_tm;
    return {te * d.dy + tm * d.dx, -te * d.dx + tm * d.dy, cplx(0.0, -k * kp * kp) * spec.amp_tm * d.psi};
}

std::array<cplx, 3> b_shape(const BeamSpec& spec, const CartesianDerivs& d)
{
    const double k = BeamSpec::k, kz = spec.kz(), kp = spec.kperp();
    // TM sign chosen so that curl E = i k (c B) and curl (c B) = -i k E hold.
    const cplx te = k * kz * spec.amp_te;
    const cplx tm = -k * k * spec.amp_tm;
    return {te * d.dx + tm * d.dy, te * d.dy - tm * d.dx, cplx(0.0, -k * kp * kp) * spec.amp_te * d.psi};
}

FieldSample em_fields(const BeamSpec& spec, const PhysicalSetup& setup, ParabolicPoint p, double z, double t)
{
    FieldSample out;
    ParabolicPoint q = p;
    if (p.h() < std::sqrt(2.0 * origin_guard_radius)) {
        out.at_origin = true;
        q = cart_to_parabolic(origin_guard_radius, 0.0);
    }
    ScalarSample s = scalar_psi(spec, q);
    CartesianDerivs d = to_cartesian(s, q);
    out.psi = s.psi;
    out.dpsi_du = s.du;
    out.dpsi_dv = s.dv;

    double phase = std::fmod(spec.kz() * z, 2.0 * pi) - std::fmod(setup.omega_natural() * t, 2.0 * pi);
    cplx carrier = std::polar(spec.amplitude_scale, phase);
    auto e = e_shape(spec, d);
    auto b = b_shape(spec, d);
    double e2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        out.e_cart[i] = carrier * e[i];
        out.b_cart[i] = carrier * b[i];
        e2 += std::norm(out.e_cart[i]);
    }
    const double h = q.h();
    out.e_parabolic = {(q.u * out.e_cart[0] + q.v * out.e_cart[1]) / h,
                       (-q.v * out.e_cart[0] + q.u * out.e_cart[1]) / h, out.e_cart[2]};
    out.intensity = 0.5 * si::c * si::eps0 * e2 * 1e-4;
    return out;
}

double calibrate_amplitude(const BeamSpec& spec, const ScalarField& field, const Window& window, int n)
{
    if (n < 2) throw std::invalid_argument("calibration grid needs at least 2 points per side");
    if (!(window.x_max > window.x_min && window.y_max > window.y_min))
        throw std::invalid_argument("calibration window is empty");
    if (spec.irradiance == 0.0) return 0.0;

    double peak = 0.0;
    const double dx = (window.x_max - window.x_min) / (n - 1);
    const double dy = (window.y_max - window.y_min) / (n - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            auto e = e_shape(spec, field.at(window.x_min + i * dx, window.y_min + j * dy));
            peak = std::max(peak, std::norm(e[0]) + std::norm(e[1]) + std::norm(e[2]));
        }
    }
    if (!(peak > 0.0)) throw std::domain_error("calibrate_amplitude: field vanishes on the window");
    const double target_e2 = 2.0 * spec.irradiance * 1e4 / (si::c * si::eps0);
    return std::sqrt(target_e2 / peak);
}

double find_um(const BeamSpec& spec, const UmSearch& search)
{
    BeamSpec dark = spec;
    dark.order_a = std::abs(spec.order_a);
    const double kp = dark.kperp();
    const double n = dark.n_p();
    const cplx a(n / 4.0, -dark.order_a / 2.0);
    const cplx b(n / 2.0, 0.0);
    auto modulus = [&](double s) {
        double pre = dark.parity == Parity::odd ? std::sqrt(kp) * s : 1.0;
        return std::abs(pre * kummer_1f1(a, b, cplx(0.0, kp * s * s)));
    };

    double lo = 0.0;
    for (double top = search.scan_max; top <= search.scan_cap; top *= 2.0) {
        double prev2 = modulus(lo + search.scan_step);
        double prev1 = modulus(lo + 2.0 * search.scan_step);
        for (double s = lo + 3.0 * search.scan_step; s <= top; s += search.scan_step) {
            double cur = modulus(s);
            if (prev1 > prev2 && prev1 >= cur) {
                // Golden-section refinement on the bracketing interval.
                double left = s - 2.0 * search.scan_step, right = s;
                const double g = 0.5 * (std::sqrt(5.0) - 1.0);
                double c = right - g * (right - left), d = left + g * (right - left);
                double fc = modulus(c), fd = modulus(d);
                while (right - left > search.resolution) {
                    if (fc > fd) {
                        right = d;
                        d = c;
                        fd = fc;
                        c = right - g * (right - left);
                        fc = modulus(c);
                    } else {
                        left = c;
                        c = d;
                        fc = fd;
                        d = left + g * (right - left);
                        fd = modulus(d);
                    }
                }
                return 0.5 * (left + right);
            }
            prev2 = prev1;
            prev1 = cur;
        }
        lo = top - 3.0 * search.scan_step;
    }
    throw std::runtime_error("find_um: no maximum of the dark-side factor below u = " +
                             std::to_string(search.scan_cap));
}

std::optional<double> dark_parabola(double u_m, double x)
{
    double u2 = u_m * u_m;
    double ax = std::abs(x);
    if (ax < 0.5 * u2) return std::nullopt;
    return std::sqrt(2.0 * u2 * (ax - 0.5 * u2));
}

std::optional<double> max_deflection_angle(double u_m, double x0)
{
    double u2 = u_m * u_m;
    double ax = std::abs(x0);
    if (ax <= 0.5 * u2) return std::nullopt;
    return std::atan(std::sqrt(u2 / ax * (1.0 - u2 / (2.0 * ax))));
}

}  // namespace weber
