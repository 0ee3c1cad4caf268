#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "weber/kummer.hpp"
#include "weber/units.hpp"

using weber::cplx;

namespace {

double rel(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("1F1 matches the extended-precision series on the imaginary axis")
{
    // Parameters as they occur in the beam: a = n/4 -+ i order/2, b = n/2.
    for (int n : {1, 3}) {
        for (double order : {-10.0, -5.0, -2.0, 0.0, 0.5, 5.0, 10.0}) {
            cplx a(n / 4.0, -order / 2.0), b(n / 2.0, 0.0);
            for (double y : {0.01, 0.7, 3.0, 12.0, 30.0, 41.9, 42.1, 55.0, 90.0, 160.0, 300.0}) {
                for (double sgn : {1.0, -1.0}) {
                    cplx z(0.0, sgn * y);
                    cplx want = oracle::kummer(a, b, z);
                    CAPTURE(n);
                    CAPTURE(order);
                    CAPTURE(y);
                    CHECK(rel(weber::kummer_1f1(a, b, z), want) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("1F1 at a = 1/4 - 2.5i, b = 1/2, z = 50i")
{
    cplx a(0.25, -2.5), b(0.5, 0.0), z(0.0, 50.0);
    CHECK(rel(weber::kummer_1f1(a, b, z), oracle::kummer(a, b, z)) < 1e-10);
}

TEST_CASE("1F1 off the imaginary axis")
{
    cplx a(0.75, 1.3), b(1.5, 0.0);
    for (cplx z : {cplx(3.0, 4.0), cplx(-20.0, 5.0), cplx(30.0, -40.0), cplx(-45.0, -10.0), cplx(60.0, 80.0),
                   cplx(-70.0, 30.0)}) {
        CAPTURE(z);
        CHECK(rel(weber::kummer_1f1(a, b, z), oracle::kummer(a, b, z)) < 1e-10);
    }
}

TEST_CASE("series and asymptotic branches agree across the switch")
{
    cplx a(0.75, 2.5), b(1.5, 0.0);
    for (double y : {42.5, 44.0, 46.0}) {
        cplx z(0.0, y);
        CHECK(rel(weber::detail::kummer_asymptotic(a, b, z), weber::detail::kummer_series(a, b, z)) < 1e-10);
    }
}

TEST_CASE("1F1 special values")
{
    CHECK(weber::kummer_1f1({0.3, 0.2}, {1.5, 0.0}, 0.0) == cplx(1.0, 0.0));
    // M(a, a, z) = e^z
    cplx z(1.5, -2.0);
    CHECK(rel(weber::kummer_1f1({0.7, 0.0}, {0.7, 0.0}, z), std::exp(z)) < 1e-13);
    CHECK_THROWS_AS(weber::kummer_1f1({0.5, 0.0}, {-2.0, 0.0}, {1.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(weber::kummer_1f1({0.5, 0.0}, {0.0, 0.0}, {1.0, 0.0}), std::domain_error);
}

TEST_CASE("log Gamma identities")
{
    const double pi = weber::pi;
    CHECK(std::abs(weber::log_gamma(0.5) - std::log(std::sqrt(pi))) < 1e-14);
    for (double x : {0.1, 1.0, 2.5, 7.0, 30.0, 170.0}) CHECK(std::abs(weber::log_gamma(x).real() - std::lgamma(x)) < 1e-12 * std::max(1.0, std::abs(std::lgamma(x))));
    for (cplx z : {cplx(0.25, -3.0), cplx(-2.3, 1.1), cplx(12.0, 40.0), cplx(0.75, 0.01)}) {
        // Gamma(z + 1) = z Gamma(z)
        cplx r = std::exp(weber::log_gamma(z + 1.0) - weber::log_gamma(z));
        CHECK(rel(r, z) < 1e-12);
    }
    for (double y : {0.3, 2.0, 9.0}) {
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        double want = 0.5 * std::log(pi / std::cosh(pi * y));
        CHECK(std::abs(weber::log_gamma({0.5, y}).real() - want) < 1e-12);
    }
}
