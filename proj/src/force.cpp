#include "weber/force.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace weber {

DipoleBranch parse_branch(std::string_view name)
{
    if (name == "plus" || name == "+") return DipoleBranch::plus;
    if (name == "minus" || name == "-") return DipoleBranch::minus;
    throw std::invalid_argument("dipole branch must be 'plus' or 'minus', got '" + std::string(name) + "'");
}

ForceDenominator parse_denominator(std::string_view name)
{
    if (name == "as_printed") return ForceDenominator::as_printed;
    if (name == "standard") return ForceDenominator::standard;
    throw std::invalid_argument("force_denominator must be 'as_printed' or 'standard', got '" +
                                std::string(name) + "'");
}

std::string_view to_string(DipoleBranch b) { return b == DipoleBranch::plus ? "plus" : "minus"; }
std::string_view to_string(ForceDenominator d) { return d == ForceDenominator::as_printed ? "as_printed" : "standard"; }

ForceModel ForceModel::make(const BeamSpec& spec, const PhysicalSetup& setup, DipoleBranch branch,
                            ForceDenominator denominator)
{
    ForceModel m;
    m.coupling_constant = dipole_moment(setup) * spec.amplitude_scale / (std::sqrt(2.0) * si::hbar * setup.gamma);
    m.detuning = detuning_natural(setup);
    m.hbar = setup.hbar_natural();
    m.kz = spec.kz();
    m.branch = branch;
    m.denominator = denominator;
    m.p_floor = sentinel_ratio * m.peak_saturation(spec, setup);
    return m;
}

double ForceModel::peak_saturation(const BeamSpec& spec, const PhysicalSetup& setup) const
{
    double e_peak = std::sqrt(2.0 * spec.irradiance * 1e4 / (si::c * si::eps0));
    double g = dipole_moment(setup) * e_peak / (si::hbar * setup.gamma);
    return 2.0 * g * g / (0.25 + detuning * detuning);
}

std::array<cplx, 4> coupling_and_gradient(const ForceModel& model, const BeamSpec& spec, const CartesianDerivs& d,
                                          double z)
{
    const double k = BeamSpec::k;
    const cplx te = k * k * spec.amp_te;
    const cplx tm = k * spec.kz() * spec.amp_tm;
    // E_x +- i E_y of the shape field and its transverse derivatives.
    const cplx j = model.branch == DipoleBranch::plus ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
    auto combo = [&](cplx px, cplx py) { return te * (py - j * px) + tm * (px + j * py); };
    const cplx carrier = model.coupling_constant * std::polar(1.0, std::fmod(spec.kz() * z, 2.0 * pi));
    const cplx g = carrier * combo(d.dx, d.dy);
    return {g, carrier * combo(d.dxx, d.dxy), carrier * combo(d.dxy, d.dyy), cplx(0.0, spec.kz()) * g};
}

cplx coupling_g(const BeamSpec& spec, const PhysicalSetup& setup, ParabolicPoint p, DipoleBranch branch)
{
    if (p.h() == 0.0) throw std::domain_error("coupling_g: parabolic basis undefined at the origin");
    ForceModel model = ForceModel::make(spec, setup, branch);
    CartesianDerivs d = to_cartesian(scalar_psi(spec, p), p);
    return coupling_and_gradient(model, spec, d, 0.0)[0];
}

CouplingSample log_gradient(const ForceModel& model, const std::array<cplx, 4>& gg, const Vec3& v)
{
    CouplingSample s;
    s.g = gg[0];
    s.grad_g = {gg[1], gg[2], gg[3]};
    const double g2 = std::norm(s.g);
    const double delta = model.detuning;
    s.p = 2.0 * g2 / (0.25 + delta * delta);
    s.d_pop = 1.0 / (1.0 + s.p);
    if (!(s.p > model.p_floor) || g2 == 0.0) {
        s.sentinel = true;
        return s;
    }
    for (int i = 0; i < 3; ++i) {
        cplx r = s.grad_g[i] / s.g;
        s.alpha[i] = r.real();
        s.beta[i] = r.imag();
    }
    const double va = v[0] * s.alpha[0] + v[1] * s.alpha[1] + v[2] * s.alpha[2];
    const double vb = v[0] * s.beta[0] + v[1] * s.beta[1] + v[2] * s.beta[2];
    s.gamma_prime = cplx(va * (1.0 - s.p) / (1.0 + s.p) + 0.5, -delta + vb);
    s.p_prime = 2.0 * g2 / std::norm(s.gamma_prime);
    return s;
}

ForceResult mean_force(const CouplingSample& s, const Vec3& v, const ForceModel& model)
{
    ForceResult out;
    if (s.sentinel) {
        out.sentinel = true;
        return out;
    }
    const double va = v[0] * s.alpha[0] + v[1] * s.alpha[1] + v[2] * s.alpha[2];
    const double vb = v[0] * s.beta[0] + v[1] * s.beta[1] + v[2] * s.beta[2];
    const double p = s.p, pp = s.p_prime, d = s.d_pop;
    const double beta_coef = d * (1.0 - p) * va + 0.5;
    const double alpha_coef = vb - model.detuning;
    // Gamma = 1. Numerator and denominator are both multiplied by p' so that
    // the far-detuned limit p' -> 0 stays well conditioned.
    const double sat = model.denominator == ForceDenominator::as_printed ? 1.0 - pp : 1.0 + pp;
    const double den = sat + 2.0 * d * va * (pp - p - p * pp);
    if (!(std::abs(den) > model.den_floor)) {
        out.sentinel = true;
        return out;
    }
    const double scale = model.hbar * pp / den;
    for (int i = 0; i < 3; ++i) out.force[i] = scale * (beta_coef * s.beta[i] + alpha_coef * s.alpha[i]);
    return out;
}

}  // namespace weber
