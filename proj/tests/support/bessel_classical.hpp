#pragma once

// Classical Bessel functions of complex order from their defining power
// series, summed in quad precision.  Independent reference for the degree-2
// kernel identities: the library builds that kernel from residue tables of
// Mellin symbols and never evaluates these series.

#include <gl4lab/qcplx.hpp>

namespace classical {

using gl4lab::qcplx;

// sum_k sgn^k (z/2)^{nu + 2k} / (k! Gamma(nu + k + 1)); sgn = -1 gives J,
// sgn = +1 gives I.  Terms peak near k ~ z/2, so the early-exit test only
// arms once the index has passed that ridge.
inline qcplx cylinder_series(const qcplx& nu, double z, int sgn) {
    __float128 half = 0.5q * static_cast<__float128>(z);
    qcplx term = gl4lab::q_pow(half, nu) / gl4lab::q_gamma(nu + qcplx{1.0q});
    qcplx sum = term;
    __float128 step = (sgn < 0 ? -1.0q : 1.0q) * half * half;
    for (int k = 0; k < 240; ++k) {
        term = term * qcplx{step} /
               (qcplx{static_cast<__float128>(k + 1)} *
                (nu + qcplx{static_cast<__float128>(k + 1)}));
        sum += term;
        if (k > half && gl4lab::q_abs(term) < 1e-40q * gl4lab::q_abs(sum)) break;
    }
    return sum;
}

inline qcplx bessel_j(const qcplx& nu, double z) {
    return cylinder_series(nu, z, -1);
}

inline qcplx bessel_i(const qcplx& nu, double z) {
    return cylinder_series(nu, z, +1);
}

// K from the two modified series; needs non-integer order.  The difference
// cancels the whole e^z front of each I, which is exactly why this runs in
// quad: at z = 30 the survivor is ~27 decades below the summands.
inline qcplx bessel_k(const qcplx& nu, double z) {
    qcplx diff = bessel_i(-nu, z) - bessel_i(nu, z);
    qcplx s = gl4lab::q_sin(qcplx{M_PIq} * nu);
    return qcplx{0.5q * M_PIq} * diff / s;
}

}  // namespace classical
