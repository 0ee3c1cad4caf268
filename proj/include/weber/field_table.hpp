#pragma once

#include <vector>

#include "weber/beam.hpp"

namespace weber {

// Precomputed separated factors F_u(s), F_v(s) on a uniform grid in the
// parabolic coordinate, interpolated with quintic Hermite polynomials.
// Because psi = F_u(u) F_v(v) exactly, two 1-D tables replace a 2-D grid.
// Points outside the tabulated range fall back to direct evaluation.
class FieldTable final : public ScalarField {
public:
    FieldTable(BeamSpec spec, double s_max, double step = 0.01);
    // Table covering every point of the window.
    static FieldTable covering(const BeamSpec& spec, const Window& window, double step = 0.01);

    CartesianDerivs at(double x, double y) const override;
    const BeamSpec& spec() const override { return spec_; }

    FactorValue factor(Axis axis, double s) const;
    double s_max() const { return s_max_; }
    double step() const { return step_; }

private:
    struct Node {
        cplx f, df, d2f, d3f;
    };
    FactorValue interpolate(const std::vector<Node>& nodes, double order, double s) const;

    BeamSpec spec_;
    DirectField direct_;
    double s_max_;
    double step_;
    std::vector<Node> u_nodes_, v_nodes_;
};

// Value at t in [0, 1] of the quintic matching value, first and second
// derivative at both ends. Derivatives are pre-scaled by the interval length.
cplx quintic_hermite(cplx f0, cplx d0, cplx s0, cplx f1, cplx d1, cplx s1, double t);

}  // namespace weber
