#pragma once

#include <quadmath.h>

#include <array>
#include <complex>

#include "gl4lab/numutil.hpp"

namespace gl4lab {

// 113-bit complex arithmetic (gcc __float128) for the kernel power series.
// The residue sums behind the degree-d Bessel kernels cancel down from
// partial sums of size exp(2 pi d x^{1/d}) to values of size x^{-(d-1)/(2d)},
// so everything entering a branch sum -- coefficients, powers, and the branch
// prefactors x^{-lambda_j} -- must carry precision far beyond a double.  Quad
// keeps the degree-4 kernel clean through x ~ 70.

struct qcplx {
    __float128 re = 0, im = 0;

    qcplx() = default;
    qcplx(__float128 r) : re(r) {}
    qcplx(__float128 r, __float128 i) : re(r), im(i) {}
    explicit qcplx(const cplx& z) : re(z.real()), im(z.imag()) {}

    cplx to_cplx() const { return {static_cast<double>(re), static_cast<double>(im)}; }

    qcplx operator-() const { return {-re, -im}; }
    qcplx& operator+=(const qcplx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    friend qcplx operator+(const qcplx& a, const qcplx& b) { return {a.re + b.re, a.im + b.im}; }
    friend qcplx operator-(const qcplx& a, const qcplx& b) { return {a.re - b.re, a.im - b.im}; }
    friend qcplx operator*(const qcplx& a, const qcplx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend qcplx operator/(const qcplx& a, const qcplx& b) {
        __float128 d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
};

inline __float128 q_abs(const qcplx& z) { return hypotq(z.re, z.im); }
inline qcplx q_conj(const qcplx& z) { return {z.re, -z.im}; }

inline qcplx q_exp(const qcplx& z) {
    __float128 m = expq(z.re);
    return {m * cosq(z.im), m * sinq(z.im)};
}

inline qcplx q_log(const qcplx& z) { return {logq(q_abs(z)), atan2q(z.im, z.re)}; }

inline qcplx q_sin(const qcplx& z) {
    return {sinq(z.re) * coshq(z.im), cosq(z.re) * sinhq(z.im)};
}

inline qcplx q_cos(const qcplx& z) {
    return {cosq(z.re) * coshq(z.im), -sinq(z.re) * sinhq(z.im)};
}

// x^w for real x > 0.
inline qcplx q_pow(__float128 x, const qcplx& w) {
    __float128 L = logq(x);
    __float128 m = expq(w.re * L);
    __float128 a = w.im * L;
    return {m * cosq(a), m * sinq(a)};
}

namespace detail {

// B_{2n} / (2n (2n-1)) for n = 1..20, from the exact Bernoulli fractions.
inline const std::array<__float128, 20>& stirling_coefficients() {
    static const std::array<__float128, 20> table = [] {
        const __float128 num[20] = {1.0q,
                                    -1.0q,
                                    1.0q,
                                    -1.0q,
                                    5.0q,
                                    -691.0q,
                                    7.0q,
                                    -3617.0q,
                                    43867.0q,
                                    -174611.0q,
                                    854513.0q,
                                    -236364091.0q,
                                    8553103.0q,
                                    -23749461029.0q,
                                    8615841276005.0q,
                                    -7709321041217.0q,
                                    2577687858367.0q,
                                    -26315271553053477373.0q,
                                    2929993913841559.0q,
                                    -261082718496449122051.0q};
        const __float128 den[20] = {6.0q,   30.0q,  42.0q,    30.0q, 66.0q,      2730.0q, 6.0q,
                                    510.0q, 798.0q, 330.0q,   138.0q, 2730.0q,   6.0q,    870.0q,
                                    14322.0q, 510.0q, 6.0q, 1919190.0q, 6.0q,    13530.0q};
        std::array<__float128, 20> out{};
        for (int n = 1; n <= 20; ++n)
            out[static_cast<std::size_t>(n - 1)] =
                num[n - 1] / (den[n - 1] * (2.0q * n) * (2.0q * n - 1.0q));
        return out;
    }();
    return table;
}

} // namespace detail

// Gamma at quad precision: reflection into Re s >= 1/2, recurrence into the
// Stirling zone |z| >= 17, then the divergent series truncated at B_40.
// The remainder there is ~ 2e-35 on the real axis and a few 1e-30 near the
// imaginary axis, which is all the kernel machinery asks of it; points far
// up a vertical line start inside the zone and skip the recurrence entirely.
inline qcplx q_gamma(const qcplx& s) {
    if (s.re < 0.5q) {
        qcplx pis{M_PIq * s.re, M_PIq * s.im};
        return qcplx{M_PIq} / (q_sin(pis) * q_gamma(qcplx{1.0q - s.re, -s.im}));
    }
    qcplx z = s;
    qcplx removed{};
    while (z.re < 1.0q || q_abs(z) < 17.0q) {
        removed += q_log(z);
        z.re += 1.0q;
    }
    qcplx lg = (z - qcplx{0.5q}) * q_log(z) - z + qcplx{0.5q * logq(2.0q * M_PIq)};
    qcplx zi = qcplx{1.0q} / z;
    qcplx z2i = zi * zi;
    qcplx p = zi;
    for (const __float128& c : detail::stirling_coefficients()) {
        lg += qcplx{c} * p;
        p = p * z2i;
    }
    return q_exp(lg - removed);
}

} // namespace gl4lab
