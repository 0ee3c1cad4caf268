#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "weber/dynamics.hpp"
#include "weber/force.hpp"

using namespace weber;

namespace {

struct Fixture {
    PhysicalSetup setup;
    BeamSpec spec;
    std::unique_ptr<DirectField> field;
    ForceModel model;

    explicit Fixture(DipoleBranch b = DipoleBranch::plus, ForceDenominator d = ForceDenominator::as_printed,
                     cplx tm = 0.0)
    {
        spec.amp_tm = tm;
        field = std::make_unique<DirectField>(spec);
        spec.amplitude_scale = calibrate_amplitude(spec, *field, Window{-60, 60, -60, 60}, 61);
        model = ForceModel::make(spec, setup, b, d);
    }

    std::array<cplx, 4> g(double x, double y, double z) const
    {
        return coupling_and_gradient(model, spec, field->at(x, y), z);
    }
};

}  // namespace

TEST_CASE("coupling is mu . E for both circular components")
{
    for (DipoleBranch b : {DipoleBranch::plus, DipoleBranch::minus}) {
        Fixture f(b, ForceDenominator::as_printed, {0.3, -0.4});
        const double sgn = b == DipoleBranch::plus ? 1.0 : -1.0;
        for (auto [x, y, z] : {std::tuple{4.0, 7.0, 0.0}, {-12.0, 3.0, 1.3}, {30.0, -20.0, -4.0}}) {
            auto e = e_shape(f.spec, f.field->at(x, y));
            // g = mu (E_x +- i E_y) / (sqrt 2 hbar Gamma) with the traveling phase.
            cplx want = f.model.coupling_constant * (e[0] + sgn * cplx(0.0, 1.0) * e[1]) *
                        std::exp(cplx(0.0, f.spec.kz() * z));
            cplx got = f.g(x, y, z)[0];
            CHECK(std::abs(got - want) <= 1e-13 * std::abs(want));
        }
    }
    Fixture f;
    CHECK(std::abs(coupling_g(f.spec, f.setup, cart_to_parabolic(4.0, 7.0)) - f.g(4.0, 7.0, 0.0)[0]) <
          1e-12 * std::abs(f.g(4.0, 7.0, 0.0)[0]));
    CHECK_THROWS_AS(coupling_g(f.spec, f.setup, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("gradient of g by finite differences")
{
    Fixture f(DipoleBranch::plus, ForceDenominator::as_printed, {0.2, 0.1});
    for (auto [x, y] : {std::pair{6.0, -9.0}, {-40.0, 12.0}, {90.0, 70.0}}) {
        auto gg = f.g(x, y, 0.7);
        auto gx = [&](double t) { return f.g(t, y, 0.7)[0]; };
        auto gy = [&](double t) { return f.g(x, t, 0.7)[0]; };
        auto gz = [&](double t) { return f.g(x, y, t)[0]; };
        double scale = std::abs(gg[1]) + std::abs(gg[2]) + std::abs(gg[3]);
        CHECK(std::abs(oracle::diff(gx, x, 1e-3) - gg[1]) < 1e-7 * scale);
        CHECK(std::abs(oracle::diff(gy, y, 1e-3) - gg[2]) < 1e-7 * scale);
        CHECK(std::abs(oracle::diff(gz, 0.7, 1e-3) - gg[3]) < 1e-7 * scale);
        CouplingSample s = log_gradient(f.model, gg, {0.0, 0.0, 0.0});
        CHECK(std::abs(s.alpha[2]) < 1e-14 * f.spec.kz());
        CHECK(s.beta[2] == doctest::Approx(f.spec.kz()).epsilon(1e-14));
    }
}

TEST_CASE("at rest p' equals p exactly and the force reduces to the algebraic form")
{
    for (ForceDenominator d : {ForceDenominator::as_printed, ForceDenominator::standard}) {
        Fixture f(DipoleBranch::plus, d);
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(-140.0, 140.0);
        int used = 0;
        while (used < 100) {
            double x = u(rng), y = u(rng);
            auto gg = f.g(x, y, 0.0);
            CouplingSample s = log_gradient(f.model, gg, {0.0, 0.0, 0.0});
            if (s.sentinel) continue;
            ++used;
            CHECK(s.p_prime == s.p);
            // Independent reduction: f = hbar p (beta/2 - delta alpha) / (1 -+ p).
            const double g2 = std::norm(gg[0]);
            const double delta = detuning_natural(f.setup);
            const double p = 2.0 * g2 / (0.25 + delta * delta);
            const double den = d == ForceDenominator::as_printed ? 1.0 - p : 1.0 + p;
            ForceResult r = mean_force(s, {0.0, 0.0, 0.0}, f.model);
            for (int i = 0; i < 3; ++i) {
                cplx lg = gg[i + 1] / gg[0];
                double want = f.setup.hbar_natural() * p * (0.5 * lg.imag() - delta * lg.real()) / den;
                double mag = std::abs(f.setup.hbar_natural() * p * (0.5 * std::abs(lg) + std::abs(delta * lg)));
                CHECK(std::abs(r.force[i] - want) <= 1e-12 * mag);
            }
        }
    }
}

TEST_CASE("red detuning pulls atoms at rest up the intensity gradient")
{
    Fixture f;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-140.0, 140.0);
    int used = 0;
    while (used < 100) {
        double x = u(rng), y = u(rng);
        auto gg = f.g(x, y, 0.0);
        CouplingSample s = log_gradient(f.model, gg, {0.0, 0.0, 0.0});
        if (s.sentinel || s.p < 1e-6 * f.model.peak_saturation(f.spec, f.setup)) continue;
        ++used;
        ForceResult r = mean_force(s, {0.0, 0.0, 0.0}, f.model);
        // Transverse gradient of |g|^2 by differences.
        auto n2x = [&](double t) { return std::norm(f.g(t, y, 0.0)[0]); };
        auto n2y = [&](double t) { return std::norm(f.g(x, t, 0.0)[0]); };
        double gx = oracle::diff(n2x, x, 1e-4), gy = oracle::diff(n2y, y, 1e-4);
        CHECK(r.force[0] * gx + r.force[1] * gy > 0.0);
    }
}

TEST_CASE("dipole part of the rest force is minus the gradient of the light shift")
{
    Fixture f(DipoleBranch::plus, ForceDenominator::standard);
    const double hb = f.setup.hbar_natural(), delta = detuning_natural(f.setup);
    auto potential = [&](double x, double y) {
        CouplingSample s = log_gradient(f.model, f.g(x, y, 0.0), {0.0, 0.0, 0.0});
        return 0.5 * hb * delta * std::log1p(s.p);
    };
    for (auto [x, y] : {std::pair{-30.0, 10.0}, {-80.0, -55.0}, {20.0, 90.0}}) {
        CouplingSample s = log_gradient(f.model, f.g(x, y, 0.0), {0.0, 0.0, 0.0});
        ForceResult r = mean_force(s, {0.0, 0.0, 0.0}, f.model);
        for (int i = 0; i < 2; ++i) {
            double reactive = hb * s.p * 0.5 * s.beta[i] / (1.0 + s.p);
            auto along = [&](double t) { return i == 0 ? potential(t, y) : potential(x, t); };
            double grad_u = oracle::diff(along, i == 0 ? x : y, 1e-4);
            CHECK(r.force[i] - reactive == doctest::Approx(-grad_u).epsilon(1e-6));
        }
    }
}

TEST_CASE("far detuned: the two denominators agree to order p")
{
    Fixture a(DipoleBranch::plus, ForceDenominator::as_printed), b(DipoleBranch::plus, ForceDenominator::standard);
    Vec3 v{-1e-3, 2e-5, -1e-5};
    auto sa = log_gradient(a.model, a.g(-20.0, 15.0, 0.0), v);
    auto sb = log_gradient(b.model, b.g(-20.0, 15.0, 0.0), v);
    ForceResult fa = mean_force(sa, v, a.model), fb = mean_force(sb, v, b.model);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(fa.force[i] - fb.force[i]) <= 4.0 * sa.p_prime * std::abs(fa.force[i]) + 1e-300);
}

TEST_CASE("below the saturation floor the force is a flagged zero")
{
    Fixture f;
    ForceModel m = f.model;
    m.p_floor = 1.0;
    auto s = log_gradient(m, f.g(3.0, 4.0, 0.0), {0.0, 0.0, 0.0});
    CHECK(s.sentinel);
    ForceResult r = mean_force(s, {0.0, 0.0, 0.0}, m);
    CHECK(r.sentinel);
    CHECK(r.force == Vec3{0.0, 0.0, 0.0});

    std::array<cplx, 4> zero{};
    CHECK(log_gradient(f.model, zero, {0.0, 0.0, 0.0}).sentinel);
}

TEST_CASE("mirror image swaps the circular component")
{
    // y -> -y sends psi to +-psi and flips psi_y, which trades E_x + i E_y
    // for E_x - i E_y up to sign. So sigma+ at (x, y) mirrors sigma- at (x, -y).
    Fixture p(DipoleBranch::plus), m(DipoleBranch::minus);
    DynamicsContext cp = DynamicsContext::make(*p.field, p.spec, p.setup, DipoleBranch::plus);
    DynamicsContext cm = DynamicsContext::make(*m.field, m.spec, m.setup, DipoleBranch::minus);
    for (auto [x, y] : {std::pair{-30.0, 10.0}, {60.0, 33.0}, {-100.0, -70.0}}) {
        AtomState a{{x, y, 0.4}, {-1e-3, 3e-5, 1e-5}, 0.0};
        AtomState b{{x, -y, 0.4}, {-1e-3, -3e-5, 1e-5}, 0.0};
        Acceleration fa = acceleration(a, cp), fb = acceleration(b, cm);
        double scale = std::abs(fa.a[0]) + std::abs(fa.a[1]) + std::abs(fa.a[2]);
        CHECK(std::abs(fa.a[0] - fb.a[0]) < 1e-9 * scale);
        CHECK(std::abs(fa.a[1] + fb.a[1]) < 1e-9 * scale);
        CHECK(std::abs(fa.a[2] - fb.a[2]) < 1e-9 * scale);
    }
}

TEST_CASE("branch and denominator names")
{
    CHECK(parse_branch("minus") == DipoleBranch::minus);
    CHECK(parse_denominator(to_string(ForceDenominator::standard)) == ForceDenominator::standard);
    CHECK_THROWS_AS(parse_denominator("other"), std::invalid_argument);
}
