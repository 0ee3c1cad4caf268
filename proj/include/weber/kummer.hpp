#pragma once

#include <complex>

namespace weber {

using cplx = std::complex<double>;

// Principal-ish log Gamma for complex argument. The imaginary part is only
// defined modulo 2 pi; callers exponentiate differences.
cplx log_gamma(cplx z);

// Kummer's confluent hypergeometric function M(a, b, z) = 1F1(a; b; z).
//
// Small |z| uses the Taylor series summed in binary128 so the cancellation
// on the imaginary axis (terms up to e^|z|) stays below double resolution.
// Large |z| uses the two-term asymptotic expansion, after a Kummer
// transformation into the upper half plane when needed.
//
// Throws std::domain_error if b is a non-positive integer and
// std::runtime_error if neither branch converges.
cplx kummer_1f1(cplx a, cplx b, cplx z);

// |z| above which the asymptotic branch is taken.
inline constexpr double kummer_asymptotic_threshold = 42.0;

namespace detail {
cplx kummer_series(cplx a, cplx b, cplx z);
cplx kummer_asymptotic(cplx a, cplx b, cplx z);
}  // namespace detail

}  // namespace weber
