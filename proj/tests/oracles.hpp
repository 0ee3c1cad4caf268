#pragma once
// Reference implementations used only by the tests. They share no code with
// the library: extended-precision series for 1F1, adaptive Gauss-Kronrod for
// the plane-wave superposition, and plain central differences.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace oracle {

using cd = std::complex<double>;

// 1F1(a; b; z) by the Taylor series in 250-digit complex arithmetic. Fine
// for |z| up to a few hundred.
inline cd kummer(cd a, cd b, cd z)
{
    using mp = boost::multiprecision::cpp_complex<250>;
    mp A(a.real(), a.imag()), B(b.real(), b.imag()), Z(z.real(), z.imag());
    mp term = 1, sum = 1;
    for (int n = 0; n < 20000; ++n) {
        term *= (A + n) / ((B + n) * (n + 1)) * Z;
        sum += term;
        if (n > std::abs(z) + 10 && abs(term) < abs(sum) * 1e-40) break;
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

// Weber scalar field as a superposition of plane waves exp(i kp (x cos phi + y sin phi))
// with spectrum |tan(phi/2)|^{i a} / sqrt(|sin phi|) (times -i / +i on the upper /
// lower half circle for odd parity), written in t = ln|tan(phi/2)|. Known up to a
// constant factor.
inline cd plane_wave_sum(bool odd, double a, double kp, double x, double y, double* err = nullptr)
{
    const cd i(0.0, 1.0);
    auto f = [&](double t) {
        double sech = 1.0 / std::cosh(t), th = std::tanh(t);
        cd up = std::exp(i * kp * (-x * th + y * sech));
        cd dn = std::exp(i * kp * (-x * th - y * sech));
        cd mix = odd ? -i * up + i * dn : up + dn;
        return std::exp(i * a * t) * std::sqrt(sech) * mix;
    };
    double e = 0.0;
    cd r = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -90.0, 90.0, 25, 1e-13, &e);
    if (err) *err = e;
    return r;
}

// Fourth-order central difference.
template <class F>
auto diff(F f, double x, double h)
{
    return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

// Second-order central difference.
template <class F>
auto diff2(F f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Best complex c minimizing |u - c v|, and the relative residual.
inline double fit_residual(const std::vector<cd>& u, const std::vector<cd>& v)
{
    cd num = 0.0;
    double den = 0.0, res = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        num += std::conj(v[k]) * u[k];
        den += std::norm(v[k]);
    }
    cd c = num / den;
    for (std::size_t k = 0; k < u.size(); ++k) {
        res += std::norm(u[k] - c * v[k]);
        norm += std::norm(u[k]);
    }
    return std::sqrt(res / norm);
}

}  // namespace oracle
