#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <random>

#include "weber/field_table.hpp"

using namespace weber;

TEST_CASE("quintic Hermite reproduces quintics")
{
    // p(t) = 1 - 2t + 0.5 t^2 + 3 t^3 - t^4 + 0.25 t^5 on [0, 1]
    auto p = [](double t) { return 1 - 2 * t + 0.5 * t * t + 3 * t * t * t - t * t * t * t + 0.25 * std::pow(t, 5); };
    auto dp = [](double t) { return -2 + t + 9 * t * t - 4 * t * t * t + 1.25 * std::pow(t, 4); };
    auto d2p = [](double t) { return 1 + 18 * t - 12 * t * t + 5 * t * t * t; };
    for (double t : {0.0, 0.13, 0.5, 0.77, 1.0})
        CHECK(quintic_hermite(p(0), dp(0), d2p(0), p(1), dp(1), d2p(1), t).real() == doctest::Approx(p(t)).epsilon(1e-14));
}

TEST_CASE("table agrees with direct evaluation")
{
    for (Parity par : {Parity::even, Parity::odd}) {
        BeamSpec s;
        s.parity = par;
        s.order_a = -5.0;
        s.amp_tm = {0.2, 0.1};
        FieldTable t(s, 20.0);
        DirectField d(s);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(-150.0, 150.0);
        double worst = 0.0;
        for (int i = 0; i < 300; ++i) {
            double x = u(rng), y = u(rng);
            CartesianDerivs a = t.at(x, y), b = d.at(x, y);
            double scale = std::abs(b.psi) + (std::abs(b.dx) + std::abs(b.dy)) / s.kperp() +
                           (std::abs(b.dxx) + std::abs(b.dxy) + std::abs(b.dyy)) / (s.kperp() * s.kperp());
            double diff = std::abs(a.psi - b.psi) + (std::abs(a.dx - b.dx) + std::abs(a.dy - b.dy)) / s.kperp() +
                          (std::abs(a.dxx - b.dxx) + std::abs(a.dxy - b.dxy) + std::abs(a.dyy - b.dyy)) /
                              (s.kperp() * s.kperp());
            worst = std::max(worst, diff / scale);
        }
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("table factors respect parity for negative arguments")
{
    BeamSpec s;
    s.parity = Parity::odd;
    FieldTable t(s, 10.0);
    FactorValue p = t.factor(Axis::u, 2.345), m = t.factor(Axis::u, -2.345);
    CHECK(std::abs(p.f + m.f) < 1e-14 * std::abs(p.f));
    CHECK(std::abs(p.df - m.df) < 1e-14 * std::abs(p.df));
    s.parity = Parity::even;
    FieldTable e(s, 10.0);
    p = e.factor(Axis::v, 1.5);
    m = e.factor(Axis::v, -1.5);
    CHECK(std::abs(p.f - m.f) < 1e-14 * std::abs(p.f));
    CHECK(std::abs(p.df + m.df) < 1e-14 * std::abs(p.df));
}

TEST_CASE("outside the table the field falls back to direct evaluation")
{
    BeamSpec s;
    FieldTable t(s, 5.0);
    DirectField d(s);
    CartesianDerivs a = t.at(80.0, 30.0), b = d.at(80.0, 30.0);
    CHECK(a.psi == b.psi);
    CHECK(a.dxy == b.dxy);
}

TEST_CASE("covering table reaches every corner of the window")
{
    BeamSpec s;
    Window w{-200.0, 200.0, -150.0, 150.0};
    FieldTable t = FieldTable::covering(s, w);
    CHECK(t.s_max() >= std::sqrt(2.0 * std::hypot(200.0, 150.0)));
    CHECK_THROWS(FieldTable(s, 1.0, 0.0));
    CHECK(std::isfinite(std::abs(t.at(0.0, 0.0).dx)));
}
