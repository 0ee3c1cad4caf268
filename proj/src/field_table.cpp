#include "weber/field_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace weber {

cplx quintic_hermite(cplx f0, cplx d0, cplx s0, cplx f1, cplx d1, cplx s1, double t)
{
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    const double h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    const double h3 = 0.5 * (t3 - 2.0 * t4 + t5);
    const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    const double h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    return h0 * f0 + h1 * d0 + h2 * s0 + h3 * s1 + h4 * d1 + h5 * f1;
}

FieldTable::FieldTable(BeamSpec spec, double s_max, double step)
    : spec_(spec), direct_(spec), s_max_(s_max), step_(step)
{
    if (!(step > 0.0 && s_max > step)) throw std::invalid_argument("FieldTable: bad range or step");
    const std::size_t n = static_cast<std::size_t>(std::ceil(s_max / step)) + 1;
    s_max_ = (n - 1) * step;
    const double kp = spec_.kperp();
    for (Axis axis : {Axis::u, Axis::v}) {
        auto& nodes = axis == Axis::u ? u_nodes_ : v_nodes_;
        const double order = factor_order(spec_, axis);
        nodes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = i * step;
            FactorValue fv = transverse_factor(spec_, axis, s);
            // Differentiate F'' = -V F once more.
            cplx d3 = -2.0 * kp * kp * s * fv.f - factor_potential(kp, order, s) * fv.df;
            nodes[i] = {fv.f, fv.df, fv.d2f, d3};
        }
    }
}

FieldTable FieldTable::covering(const BeamSpec& spec, const Window& window, double step)
{
    double r = 0.0;
    for (double x : {window.x_min, window.x_max})
        for (double y : {window.y_min, window.y_max}) r = std::max(r, std::hypot(x, y));
    // u^2 = r + x and v^2 = r - x are both at most 2 r.
    return FieldTable(spec, std::sqrt(2.0 * r) + 4.0 * step, step);
}

FactorValue FieldTable::interpolate(const std::vector<Node>& nodes, double order, double s) const
{
    double pos = s / step_;
    std::size_t i = static_cast<std::size_t>(pos);
    if (i >= nodes.size() - 1) i = nodes.size() - 2;
    double t = pos - static_cast<double>(i);
    const Node& a = nodes[i];
    const Node& b = nodes[i + 1];
    const double h = step_, h2 = step_ * step_;
    FactorValue out;
    out.f = quintic_hermite(a.f, h * a.df, h2 * a.d2f, b.f, h * b.df, h2 * b.d2f, t);
    out.df = quintic_hermite(a.df, h * a.d2f, h2 * a.d3f, b.df, h * b.d2f, h2 * b.d3f, t);
    out.d2f = -factor_potential(spec_.kperp(), order, s) * out.f;
    return out;
}

FactorValue FieldTable::factor(Axis axis, double s) const
{
    const bool negative = s < 0.0;
    const double as = std::abs(s);
    if (as > s_max_) return transverse_factor(spec_, axis, s);
    const auto& nodes = axis == Axis::u ? u_nodes_ : v_nodes_;
    FactorValue out = interpolate(nodes, factor_order(spec_, axis), as);
    if (negative) {
        // Even factors are even in s, odd factors are odd.
        if (spec_.parity == Parity::even) {
            out.df = -out.df;
        } else {
            out.f = -out.f;
            out.d2f = -out.d2f;
        }
    }
    return out;
}

CartesianDerivs FieldTable::at(double x, double y) const
{
    if (std::hypot(x, y) < origin_guard_radius) {
        x = origin_guard_radius;
        y = 0.0;
    }
    ParabolicPoint p = cart_to_parabolic(x, y);
    if (std::abs(p.u) > s_max_ || p.v > s_max_) return direct_.at(x, y);
    return to_cartesian(combine_factors(factor(Axis::u, p.u), factor(Axis::v, p.v)), p);
}

}  // namespace weber
