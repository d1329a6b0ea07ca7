#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gl4lab/errors.hpp"

namespace gl4lab {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 2.0 * PI;

// e(x) = exp(2*pi*i*x)
inline cplx e_of(double x) {
    double a = TWO_PI * x;
    return {std::cos(a), std::sin(a)};
}

// e(num/den) with the fraction reduced exactly mod 1 before any floating
// arithmetic touches it.  Exponential sums live and die on this.
inline cplx e_frac(std::int64_t num, std::int64_t den) {
    if (den == 0) throw constraint_error("e_frac: zero denominator");
    if (den < 0) { den = -den; num = -num; }
    num %= den;
    if (num < 0) num += den;
    double a = TWO_PI * static_cast<double>(num) / static_cast<double>(den);
    return {std::cos(a), std::sin(a)};
}

inline std::int64_t mod_norm(std::int64_t a, std::int64_t m) {
    a %= m;
    if (a < 0) a += m;
    return a;
}

// (a*b) mod m without overflow for m < 2^62.
inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(
        static_cast<__int128>(mod_norm(a, m)) * mod_norm(b, m) % m);
}

// Inverse of a modulo m (m >= 1); throws unless gcd(a, m) = 1.  By
// convention every residue is invertible mod 1 with inverse 0.
inline std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
    if (m <= 0) throw constraint_error("inv_mod: modulus must be positive");
    if (m == 1) return 0;
    std::int64_t r0 = m, r1 = mod_norm(a, m), t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        r0 -= q * r1; std::swap(r0, r1);
        t0 -= q * t1; std::swap(t0, t1);
    }
    if (r0 != 1) throw constraint_error("inv_mod: argument not coprime to modulus");
    return mod_norm(t0, m);
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::int64_t> primes_up_to(std::int64_t n) {
    std::vector<std::int64_t> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<std::size_t>(n) + 1, false);
    for (std::int64_t p = 2; p <= n; ++p) {
        if (comp[static_cast<std::size_t>(p)]) continue;
        out.push_back(p);
        for (std::int64_t q = p * p; q <= n; q += p) comp[static_cast<std::size_t>(q)] = true;
    }
    return out;
}

inline std::int64_t euler_phi(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

inline int mobius(std::int64_t n) {
    if (n < 1) throw constraint_error("mobius: argument must be positive");
    int mu = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

inline std::vector<std::int64_t> divisors_of(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        if (d != n / d) out.push_back(n / d);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct prime_power {
    std::int64_t p;
    int e;
};

// Trial-division factorization with an explicit work budget.
inline std::vector<prime_power> factorize(std::int64_t n, std::int64_t budget = 1'000'000) {
    if (n <= 0) throw constraint_error("factorize: argument must be positive");
    std::vector<prime_power> out;
    std::int64_t steps = 0;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (++steps > budget)
            throw resource_error("factorize: trial-division budget exceeded for n=" + std::to_string(n));
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

// Deterministic uniform draws on top of a fixed-width counter generator.
// std::mt19937_64 is pinned by the standard, so seeded runs reproduce
// bit-for-bit on any platform; the [0,1) mapping below avoids
// distribution-object leeway entirely.
class rng {
public:
    explicit rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // xorshift* step; tiny, seed-stable, and good enough for sweeps.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    double uniform() { // [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) { // inclusive ends
        return lo + static_cast<std::int64_t>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

} // namespace gl4lab
