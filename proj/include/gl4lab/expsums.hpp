#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "gl4lab/bounds.hpp"
#include "gl4lab/errors.hpp"
#include "gl4lab/numutil.hpp"

namespace gl4lab {

struct exp_sum_value {
    cplx value{0.0, 0.0};
    std::int64_t terms = 0; // summands enumerated; |value| <= terms always
};

namespace detail {

// inv[v] = v^{-1} mod M for units, -1 for non-units.
inline std::vector<std::int64_t> unit_inverses(std::int64_t M) {
    std::vector<std::int64_t> inv(static_cast<std::size_t>(M), -1);
    if (M == 1) {
        inv[0] = 0;
        return inv;
    }
    for (std::int64_t v = 0; v < M; ++v)
        if (std::gcd(v, M) == 1) inv[static_cast<std::size_t>(v)] = inv_mod(v, M);
    return inv;
}

} // namespace detail

// S(m, n; c) = sum over units v mod c of e((m v + n vbar)/c), with the
// fraction reduced in exact integer arithmetic.
inline exp_sum_value kloosterman_classical(std::int64_t m, std::int64_t n, std::int64_t c) {
    if (c <= 0) throw constraint_error("kloosterman_classical: modulus must be positive");
    if (c == 1) return {cplx(1.0, 0.0), 1};
    exp_sum_value out;
    for (std::int64_t v = 1; v < c; ++v) {
        if (std::gcd(v, c) != 1) continue;
        std::int64_t vbar = inv_mod(v, c);
        out.value += e_frac(mod_norm(m, c) * v + mod_norm(n, c) * vbar, c);
        ++out.terms;
    }
    return out;
}

// Sum over units u mod q of e(k u / q); equals the classical arithmetic
// function usually written c_q(k).
inline exp_sum_value ramanujan_sum(std::int64_t q, std::int64_t k) {
    if (q <= 0) throw constraint_error("ramanujan_sum: modulus must be positive");
    if (q == 1) return {cplx(1.0, 0.0), 1};
    exp_sum_value out;
    for (std::int64_t u = 1; u < q; ++u) {
        if (std::gcd(u, q) != 1) continue;
        out.value += e_frac(mod_norm(k, q) * u, q);
        ++out.terms;
    }
    return out;
}

// Parameter block for the generalized two-variable Kloosterman sum attached
// to the divisor structure of the degree-4 Voronoi formula.
struct kloosterman_spec {
    std::int64_t a = 0, n = 0;
    std::int64_t c = 1, q1 = 1, q2 = 1, d1 = 1, d2 = 1;

    std::int64_t m1() const { return c * q1 / d1; }
    std::int64_t m2() const { return c * q1 * q2 / (d1 * d2); }

    void validate() const {
        if (c <= 0 || q1 <= 0 || q2 <= 0 || d1 <= 0 || d2 <= 0)
            throw constraint_error("kloosterman_spec: moduli must be positive");
        if ((c * q1) % d1 != 0)
            throw constraint_error("kloosterman_spec: d1=" + std::to_string(d1) +
                                   " does not divide c*q1=" + std::to_string(c * q1));
        if ((c * q1 / d1 * q2) % d2 != 0)
            throw constraint_error("kloosterman_spec: d2=" + std::to_string(d2) +
                                   " does not divide c*q1*q2/d1=" +
                                   std::to_string(c * q1 / d1 * q2));
    }
};

// Kl2(a, n, c; q1, q2, d1, d2)
//   = sum over units v1 mod c q1/d1 and units v2 mod c q1 q2/(d1 d2) of
//     e( a v1 d1 / c  +  v1bar v2 d2 / (c q1/d1)  +  n v2bar / (c q1 q2/(d1 d2)) ),
// with each inverse taken modulo its own summation modulus.  All three
// fractions are combined over L = lcm of the denominators and reduced in
// integer arithmetic, so the only rounding is the final unit-circle call.
inline exp_sum_value kloosterman_general(const kloosterman_spec& s,
                                         std::int64_t budget = 10'000'000) {
    s.validate();
    const std::int64_t M1 = s.m1(), M2 = s.m2();
    const std::int64_t L = std::lcm(std::lcm(s.c, M1), M2);

    auto inv1 = detail::unit_inverses(M1);
    auto inv2 = detail::unit_inverses(M2);

    std::int64_t units1 = 0, units2 = 0;
    for (auto v : inv1) units1 += (v >= 0);
    for (auto v : inv2) units2 += (v >= 0);
    if (units1 * units2 > budget)
        throw resource_error("kloosterman_general: " + std::to_string(units1 * units2) +
                             " terms exceed budget " + std::to_string(budget));

    const std::int64_t f0 = L / s.c, f1 = L / M1, f2 = L / M2;
    const std::int64_t a_red = mod_norm(s.a, L), n_red = mod_norm(s.n, L);

    exp_sum_value out;
    for (std::int64_t v1 = 0; v1 < M1; ++v1) {
        if (inv1[static_cast<std::size_t>(v1)] < 0) continue;
        const std::int64_t v1bar = inv1[static_cast<std::size_t>(v1)];
        const std::int64_t head = mul_mod(mul_mod(a_red, v1, L), mod_norm(s.d1 * f0, L), L);
        const std::int64_t mid_base = mul_mod(v1bar, mod_norm(s.d2 * f1, L), L);
        for (std::int64_t v2 = 0; v2 < M2; ++v2) {
            if (inv2[static_cast<std::size_t>(v2)] < 0) continue;
            const std::int64_t v2bar = inv2[static_cast<std::size_t>(v2)];
            std::int64_t num = head + mul_mod(mid_base, v2, L) +
                               mul_mod(n_red, mul_mod(v2bar, f2, L), L);
            out.value += e_frac(num, L);
            ++out.terms;
        }
    }
    return out;
}

// First orthogonality reduction: averaging the generalized sums over the
// twist class a mod c leaves only pairs with d1 (u1 - v1) = 0 mod c, i.e.
// v1 = u1 + (c/(c,d1)) w.  Both sides are enumerated independently (left:
// literal products of generalized sums; right: the congruence-restricted
// four-fold sum factored through classical Kloosterman sums in the inner
// variables) and the scaled difference is returned.
inline double verify_orthogonality_reduction(std::int64_t c, std::int64_t n2, std::int64_t d1,
                                             std::int64_t d2, std::int64_t m, std::int64_t n,
                                             std::int64_t budget = 10'000'000) {
    kloosterman_spec base{0, 0, c, n2, 1, d1, d2};
    base.validate();
    const std::int64_t M1 = base.m1(), M2 = base.m2();

    cplx lhs(0.0, 0.0);
    for (std::int64_t a = 0; a < c; ++a) {
        kloosterman_spec sm{a, -m, c, n2, 1, d1, d2};
        kloosterman_spec sn{a, -n, c, n2, 1, d1, d2};
        lhs += kloosterman_general(sm, budget).value *
               std::conj(kloosterman_general(sn, budget).value);
    }

    // Right side: v1 = u1 + c' w with c' = c/(c,d1), inner sums
    // S(u1bar, -m; M2) and S(v1bar, -n; M2) tabulated over the first index.
    const std::int64_t cp = c / std::gcd(c, d1);
    if (M1 % cp != 0)
        throw constraint_error("orthogonality: congruence step size does not divide modulus");

    std::vector<cplx> Sm(static_cast<std::size_t>(M2)), Sn(static_cast<std::size_t>(M2));
    for (std::int64_t x = 0; x < M2; ++x) {
        Sm[static_cast<std::size_t>(x)] = kloosterman_classical(x, -m, M2).value;
        Sn[static_cast<std::size_t>(x)] = kloosterman_classical(x, -n, M2).value;
    }

    auto inv1 = detail::unit_inverses(M1);
    cplx rhs(0.0, 0.0);
    for (std::int64_t u1 = 0; u1 < M1; ++u1) {
        if (inv1[static_cast<std::size_t>(u1)] < 0) continue;
        for (std::int64_t w = 0; w < M1 / cp; ++w) {
            std::int64_t v1 = mod_norm(u1 + cp * w, M1);
            if (inv1[static_cast<std::size_t>(v1)] < 0) continue;
            std::int64_t u1bar = mod_norm(inv1[static_cast<std::size_t>(u1)], M2);
            std::int64_t v1bar = mod_norm(inv1[static_cast<std::size_t>(v1)], M2);
            rhs += Sm[static_cast<std::size_t>(u1bar)] *
                   std::conj(Sn[static_cast<std::size_t>(v1bar)]);
        }
    }
    rhs *= static_cast<double>(c);

    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

// Second orthogonality reduction: with A = c n2/d1 and B = c n2/(d1 d2),
//   sum_{a mod A} S(a,-m;B) conj S(a,-n;B) = A * sum*_{u mod B} e((n-m) ubar / B),
// because the a-average forces the two unit variables equal.  Left side by
// literal enumeration, right side through the unit sum.
inline double verify_second_orthogonality(std::int64_t c, std::int64_t n2, std::int64_t d1,
                                          std::int64_t d2, std::int64_t m, std::int64_t n,
                                          std::int64_t budget = 10'000'000) {
    if (c <= 0 || n2 <= 0) throw constraint_error("orthogonality: c, n2 must be positive");
    if ((c * n2) % d1 != 0)
        throw constraint_error("orthogonality: d1 does not divide c*n2");
    if ((c * n2 / d1) % d2 != 0)
        throw constraint_error("orthogonality: d2 does not divide c*n2/d1");
    const std::int64_t A = c * n2 / d1, B = c * n2 / (d1 * d2);
    if (A * B * B > budget)
        throw resource_error("orthogonality: enumeration of ~" + std::to_string(A * B * B) +
                             " terms exceeds budget");

    cplx lhs(0.0, 0.0);
    for (std::int64_t a = 0; a < A; ++a)
        lhs += kloosterman_classical(a, -m, B).value *
               std::conj(kloosterman_classical(a, -n, B).value);

    // ubar runs over units exactly when u does
    cplx rhs = static_cast<double>(A) * ramanujan_sum(B, n - m).value;

    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

// max over primes p <= p_max and a, b in (Z/p)^* of |S(a,b;p)| / (2 sqrt p).
// The substitution v -> a^{-1} v shows S(a,b;p) = S(1, ab; p), so sweeping
// the product t = ab mod p covers every pair.
inline bound_check_result weil_bound_sweep(std::int64_t p_max) {
    bound_check_result r;
    r.id = inequality_id::weil_classical;
    for (std::int64_t p : primes_up_to(p_max)) {
        double cap = 2.0 * std::sqrt(static_cast<double>(p));
        for (std::int64_t t = 1; t < p; ++t) {
            double ratio = std::abs(kloosterman_classical(1, t, p).value) / cap;
            if (ratio > r.worst_ratio) {
                r.worst_ratio = ratio;
                r.witness = {p, 0, 1, static_cast<int>(t), 0};
            }
        }
    }
    r.strict_ratio = r.worst_ratio;
    r.finalize();
    return r;
}

} // namespace gl4lab
