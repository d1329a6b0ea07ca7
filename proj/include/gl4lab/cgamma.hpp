#pragma once

#include <cmath>
#include <complex>

#include "gl4lab/numutil.hpp"

namespace gl4lab {

namespace detail {

// Lanczos approximation, g = 7, 9 terms.  Relative accuracy ~1e-13 on the
// right half plane, which is plenty: every consumer feeds the result into
// exp(sum of log-gammas), where only the combined value matters.
inline constexpr double lanczos_g = 7.0;
inline constexpr double lanczos_c[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

// A logarithm of sin(pi z), safe against overflow for large |Im z|.  The
// branch is unspecified; callers only ever exponentiate sums of these.
inline cplx log_sin_pi(cplx z) {
    const cplx I(0.0, 1.0);
    double y = z.imag();
    if (std::abs(y) < 8.0) return std::log(std::sin(PI * z));
    if (y > 0.0) {
        // sin(pi z) = -e^{-i pi z} (1 - e^{2 i pi z}) / (2i)
        return -I * PI * z + std::log(1.0 - std::exp(2.0 * I * PI * z)) + std::log(cplx(0.0, 0.5));
    }
    return I * PI * z + std::log(1.0 - std::exp(-2.0 * I * PI * z)) - std::log(cplx(0.0, 2.0));
}

} // namespace detail

// A logarithm of Gamma(z) for complex z (poles excepted).  Principal branch
// on Re z >= 1/2; elsewhere the reflection formula may shift the imaginary
// part by multiples of 2*pi, which is harmless under exponentiation.
inline cplx log_gamma(cplx z) {
    using namespace detail;
    if (z.real() < 0.5) {
        return std::log(PI) - log_sin_pi(z) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cplx x = lanczos_c[0];
    for (int i = 1; i < 9; ++i) x += lanczos_c[i] / (z + static_cast<double>(i));
    cplx t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline cplx cgamma(cplx z) { return std::exp(log_gamma(z)); }

// Gamma(a)/Gamma(b) without overflow in the numerator or denominator.
inline cplx gamma_ratio(cplx a, cplx b) { return std::exp(log_gamma(a) - log_gamma(b)); }

} // namespace gl4lab
