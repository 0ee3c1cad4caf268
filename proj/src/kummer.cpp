#include "weber/kummer.hpp"
#include "weber/units.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace weber {

namespace {

// Minimal binary128 complex; only what the series recurrence needs.
struct Quad {
    __float128 re = 0, im = 0;

    Quad() = default;
    Quad(__float128 r, __float128 i) : re(r), im(i) {}
    explicit Quad(cplx z) : re(z.real()), im(z.imag()) {}

    Quad operator+(const Quad& o) const { return {re + o.re, im + o.im}; }
    Quad operator*(const Quad& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Quad operator/(const Quad& o) const
    {
        __float128 d = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
    }
    __float128 norm() const { return re * re + im * im; }
    cplx to_double() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

bool is_nonpositive_integer(cplx b)
{
    return b.imag() == 0.0 && b.real() <= 0.0 && b.real() == std::floor(b.real());
}

}  // namespace

cplx log_gamma(cplx z)
{
    if (z.real() < 0.5) {
        // Reflection.
        return std::log(pi) - std::log(std::sin(pi * z)) - log_gamma(1.0 - z);
    }
    cplx shift = 0.0;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    static const double bern[] = {1.0 / 6.0,         -1.0 / 30.0,  1.0 / 42.0,         -1.0 / 30.0,
                                  5.0 / 66.0,        -691.0 / 2730.0, 7.0 / 6.0,      -3617.0 / 510.0};
    cplx zinv = 1.0 / z, zinv2 = zinv * zinv, pw = zinv, series = 0.0;
    for (int k = 1; k <= 8; ++k) {
        series += bern[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * pw;
        pw *= zinv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series - shift;
}

namespace detail {

cplx kummer_series(cplx a, cplx b, cplx z)
{
    const Quad qa(a), qb(b), qz(z);
    Quad term(1, 0), sum(1, 0);
    const double zabs = std::abs(z);
    constexpr int cap = 5000;
    int quiet = 0;
    for (int n = 0; n < cap; ++n) {
        Quad qn(n, 0);
        term = term * (qa + qn) / (qb + qn) * qz / Quad(n + 1, 0);
        sum = sum + term;
        if (term.norm() == 0) return sum.to_double();
        if (n > zabs && term.norm() < sum.norm() * static_cast<__float128>(1e-64)) {
            if (++quiet >= 3) return sum.to_double();
        } else {
            quiet = 0;
        }
    }
    throw std::runtime_error("kummer_1f1: series did not converge for |z| = " + std::to_string(zabs));
}

cplx kummer_asymptotic(cplx a, cplx b, cplx z)
{
    // DLMF 13.7.2 with the upper sign; the caller guarantees 0 <= ph z <= pi.
    // First sum carries e^z z^(a-b) / Gamma(a), second e^(i pi a) z^(-a) / Gamma(b-a).
    const cplx lgb = log_gamma(b);
    auto asum = [](cplx p, cplx q, cplx w) {
        cplx term = 1.0, sum = 1.0;
        double last = 1.0;
        for (int s = 0; s < 2000; ++s) {
            term *= (p + double(s)) * (q + double(s)) / (double(s + 1) * w);
            double mag = std::abs(term);
            if (mag > last && s > 2) return std::pair{sum, last};  // optimal truncation
            sum += term;
            last = mag;
            if (mag < 1e-18 * std::abs(sum)) return std::pair{sum, mag};
        }
        return std::pair{sum, last};
    };

    cplx result = 0.0;
    double err = 0.0;
    // Terms with 1/Gamma at a pole vanish identically.
    if (!is_nonpositive_integer(a)) {
        auto [s1, e1] = asum(1.0 - a, b - a, z);
        cplx pref = std::exp(z + (a - b) * std::log(z) + lgb - log_gamma(a));
        result += pref * s1;
        err = std::max(err, e1 * std::abs(pref));
    }
    if (!is_nonpositive_integer(b - a)) {
        auto [s2, e2] = asum(a, a - b + 1.0, -z);
        cplx pref = std::exp(cplx(0.0, pi) * a - a * std::log(z) + lgb - log_gamma(b - a));
        result += pref * s2;
        err = std::max(err, e2 * std::abs(pref));
    }
    if (!(err <= 1e-11 * std::abs(result)))
        throw std::runtime_error("kummer_1f1: asymptotic expansion not accurate at |z| = " +
                                 std::to_string(std::abs(z)));
    return result;
}

}  // namespace detail

cplx kummer_1f1(cplx a, cplx b, cplx z)
{
    if (is_nonpositive_integer(b))
        throw std::domain_error("kummer_1f1: b must not be a non-positive integer");
    if (z == 0.0) return 1.0;
    if (std::abs(z) <= kummer_asymptotic_threshold) return detail::kummer_series(a, b, z);
    // M(a,b,z) = e^z M(b-a,b,-z) maps the lower half plane onto the upper one.
    if (z.imag() < 0.0 || (z.imag() == 0.0 && z.real() < 0.0))
        return std::exp(z) * detail::kummer_asymptotic(b - a, b, -z);
    return detail::kummer_asymptotic(a, b, z);
}

}  // namespace weber
