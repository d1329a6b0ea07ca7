#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "gl4lab/errors.hpp"
#include "gl4lab/numutil.hpp"

namespace gl4lab {

// Ramanujan-progress exponents for GL(4) and its exterior square: the only
// analytic inputs the bound checks rely on.
inline constexpr double THETA4 = 9.0 / 22.0;
inline constexpr double THETA6 = 35.0 / 74.0;

// Local Satake parameters at one prime.  The duality identity
// A(n3,n2,n1) = conj A(n1,n2,n3) needs the multiset closed under
// z -> 1/conj(z) with product 1; both generators below and the degree-3
// symmetric lift produce such sets.
struct satake_set {
    std::int64_t p = 0;
    std::array<cplx, 4> alpha{};
    bool tempered = true;
};

namespace detail {

inline cplx det4(const std::array<std::array<cplx, 4>, 4>& m) {
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
        return m[r0][c0] * (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) -
               m[r0][c1] * (m[r1][c0] * m[r2][c2] - m[r1][c2] * m[r2][c0]) +
               m[r0][c2] * (m[r1][c0] * m[r2][c1] - m[r1][c1] * m[r2][c0]);
    };
    cplx d(0.0, 0.0);
    const int sign[4] = {1, -1, 1, -1};
    for (int c = 0; c < 4; ++c) {
        int cc[3], k = 0;
        for (int j = 0; j < 4; ++j)
            if (j != c) cc[k++] = j;
        d += static_cast<double>(sign[c]) * m[0][c] * det3(1, 2, 3, cc[0], cc[1], cc[2]);
    }
    return d;
}

// Elementary symmetric polynomials e1..e4 of the four parameters.
inline std::array<cplx, 5> elementary_sym(const std::array<cplx, 4>& a) {
    std::array<cplx, 5> e{};
    e[0] = 1.0;
    for (int i = 0; i < 4; ++i)
        for (int k = std::min(i + 1, 4); k >= 1; --k) e[k] = e[k] + a[i] * e[k - 1];
    return e;
}

// Complete homogeneous h_0..h_max via Newton-style recurrence
// h_k = e1 h_{k-1} - e2 h_{k-2} + e3 h_{k-3} - e4 h_{k-4}.
inline std::vector<cplx> complete_homogeneous(const std::array<cplx, 4>& a, int max) {
    auto e = elementary_sym(a);
    std::vector<cplx> h(static_cast<std::size_t>(std::max(max, 0)) + 1);
    h[0] = 1.0;
    for (int k = 1; k <= max; ++k) {
        cplx s(0.0, 0.0);
        for (int j = 1; j <= 4 && j <= k; ++j)
            s += (j % 2 ? 1.0 : -1.0) * e[j] * h[static_cast<std::size_t>(k - j)];
        h[static_cast<std::size_t>(k)] = s;
    }
    return h;
}

} // namespace detail

// Schur polynomial s_lambda(alpha) for the partition
// lambda = (nu1+nu2+nu3, nu2+nu3, nu3, 0), which is the Fourier coefficient
// A(p^{nu1}, p^{nu2}, p^{nu3}) of a form with these local parameters.
//
// Two evaluation routes: the bialternant determinant ratio when the alphas
// are pairwise separated, and the Jacobi-Trudi determinant in complete
// homogeneous polynomials otherwise (the bialternant is 0/0 at coincident
// parameters, e.g. alpha = (1,1,1,1)).
inline cplx schur_coefficient(const std::array<cplx, 4>& alpha, int nu1, int nu2, int nu3) {
    if (nu1 < 0 || nu2 < 0 || nu3 < 0) return {0.0, 0.0};
    const int lam[4] = {nu1 + nu2 + nu3, nu2 + nu3, nu3, 0};

    double min_gap = 1e300;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            min_gap = std::min(min_gap, std::abs(alpha[i] - alpha[j]));

    if (min_gap > 1e-8) {
        std::array<std::array<cplx, 4>, 4> num{}, den{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                num[i][j] = std::pow(alpha[j], lam[i] + 3 - i);
                den[i][j] = std::pow(alpha[j], 3 - i);
            }
        return detail::det4(num) / detail::det4(den);
    }

    auto h = detail::complete_homogeneous(alpha, lam[0] + 3);
    std::array<std::array<cplx, 4>, 4> m{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            int k = lam[i] - i + j;
            m[i][j] = (k < 0) ? cplx(0.0, 0.0) : h[static_cast<std::size_t>(k)];
        }
    return detail::det4(m);
}

// The six pairwise products alpha_i alpha_j (i<j): local parameters of the
// exterior-square lift.
inline std::array<cplx, 6> exterior_square_params(const std::array<cplx, 4>& alpha) {
    std::array<cplx, 6> out{};
    int k = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) out[k++] = alpha[i] * alpha[j];
    return out;
}

// A(1, p^nu, 1) computed through the exterior square: the Dirichlet series
// of the middle coefficients equals the degree-6 Euler factor divided by the
// local zeta factor at 2s, so the coefficient is h_nu - h_{nu-2} in the six
// pairwise products.  Agrees with schur_coefficient(alpha, 0, nu, 0)
// identically when prod(alpha) = 1; the test suite pins that agreement.
inline cplx middle_coefficient_via_ext_square(const std::array<cplx, 4>& alpha, int nu) {
    if (nu < 0) return {0.0, 0.0};
    auto xs = exterior_square_params(alpha);
    // h_k of the six products, built by multiplying 1/(1 - x t) into the
    // series one variable at a time: in increasing k the in-place update
    // h[k] += x h[k-1] uses the already-updated h[k-1], which is exactly the
    // recurrence new[k] = old[k] + x new[k-1].
    std::vector<cplx> h(static_cast<std::size_t>(nu) + 1, cplx(0.0, 0.0));
    h[0] = 1.0;
    for (const cplx& x : xs)
        for (int k = 1; k <= nu; ++k)
            h[static_cast<std::size_t>(k)] += x * h[static_cast<std::size_t>(k - 1)];
    cplx hnu2 = (nu >= 2) ? h[static_cast<std::size_t>(nu - 2)] : cplx(0.0, 0.0);
    return h[static_cast<std::size_t>(nu)] - hnu2;
}

// Jacobi-Trudi evaluator with one shared complete-homogeneous list per
// parameter set: the right tool for dense exponent sweeps, where the
// determinant-ratio route would re-exponentiate for every triple.  Valid for
// every alpha (the identity is polynomial); agreement with schur_coefficient
// is pinned in the tests.
class local_schur_evaluator {
public:
    local_schur_evaluator(const std::array<cplx, 4>& alpha, int max_lambda1)
        : h_(detail::complete_homogeneous(alpha, max_lambda1 + 3)) {}

    cplx operator()(int nu1, int nu2, int nu3) const {
        if (nu1 < 0 || nu2 < 0 || nu3 < 0) return {0.0, 0.0};
        const int lam[4] = {nu1 + nu2 + nu3, nu2 + nu3, nu3, 0};
        if (static_cast<std::size_t>(lam[0] + 3) >= h_.size())
            throw constraint_error("local_schur_evaluator: exponent sum exceeds construction cap");
        std::array<std::array<cplx, 4>, 4> m{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                int k = lam[i] - i + j;
                m[i][j] = (k < 0) ? cplx(0.0, 0.0) : h_[static_cast<std::size_t>(k)];
            }
        return detail::det4(m);
    }

private:
    std::vector<cplx> h_;
};

// GL(2) Hecke-Maass data: spectral parameter, parity, and Hecke eigenvalues
// at primes.  Eigenvalues at prime powers follow the usual recurrence
// lambda(p^k) = lambda(p) lambda(p^{k-1}) - lambda(p^{k-2}).
struct gl2_maass {
    double t = 0.0;
    int parity = 0; // 0 even, 1 odd
    std::map<std::int64_t, double> lambda_p;

    double lambda_prime_power(std::int64_t p, int k) const {
        if (k < 0) return 0.0;
        if (k == 0) return 1.0;
        auto it = lambda_p.find(p);
        if (it == lambda_p.end())
            throw constraint_error("gl2_maass: no Hecke eigenvalue stored for p=" +
                                   std::to_string(p));
        double lm2 = 1.0, lm1 = it->second;
        for (int j = 2; j <= k; ++j) {
            double l = it->second * lm1 - lm2;
            lm2 = lm1;
            lm1 = l;
        }
        return lm1;
    }

    double lambda(std::int64_t n) const {
        if (n <= 0) throw constraint_error("gl2_maass: lambda argument must be positive");
        double v = 1.0;
        for (const auto& pp : factorize(n)) v *= lambda_prime_power(pp.p, pp.e);
        return v;
    }
};

// Langlands data for a degree-4 form: archimedean parameters plus a local
// Satake provider.  The provider must be deterministic in p.
struct langlands_data {
    std::array<cplx, 4> lambda_inf{};
    std::function<satake_set(std::int64_t)> local;
};

// Degree-3 symmetric-power lift of GL(2) Maass data to a GL(4) dataset:
// beta + 1/beta = lambda(p) gives local parameters {beta^3, beta, beta^-1,
// beta^-3}; archimedean parameters {3it, it, -it, -3it}.  Inputs with
// |lambda(p)| > 2 are permitted but the resulting set leaves the unit circle
// (tempered = false).
inline langlands_data sym3_lift(const gl2_maass& gl2) {
    langlands_data out;
    double t = gl2.t;
    out.lambda_inf = {cplx(0.0, 3.0 * t), cplx(0.0, t), cplx(0.0, -t), cplx(0.0, -3.0 * t)};
    // copy the eigenvalue map so the provider owns its data
    gl2_maass data = gl2;
    out.local = [data](std::int64_t p) {
        auto it = data.lambda_p.find(p);
        if (it == data.lambda_p.end())
            throw constraint_error("sym3_lift: no GL(2) eigenvalue for p=" + std::to_string(p));
        double lam = it->second;
        satake_set s;
        s.p = p;
        cplx beta;
        if (std::abs(lam) <= 2.0) {
            beta = cplx(lam / 2.0, std::sqrt(std::max(0.0, 1.0 - lam * lam / 4.0)));
            s.tempered = true;
        } else {
            double r = std::abs(lam) / 2.0 + std::sqrt(lam * lam / 4.0 - 1.0);
            beta = cplx(lam > 0 ? r : -r, 0.0);
            s.tempered = false;
        }
        cplx b3 = beta * beta * beta;
        s.alpha = {b3, beta, 1.0 / beta, 1.0 / b3};
        return s;
    };
    return out;
}

// Random local parameter generators, seeded per prime so that a table built
// from (seed, p) is reproducible regardless of query order.

// All |alpha_i| = 1 with product exactly 1.
inline satake_set random_unitary_satake(std::int64_t p, std::uint64_t seed) {
    rng r(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(p) * 0xBF58476D1CE4E5B9ULL + 1);
    double t1 = r.uniform(), t2 = r.uniform(), t3 = r.uniform();
    satake_set s;
    s.p = p;
    s.alpha = {e_of(t1), e_of(t2), e_of(t3), e_of(-(t1 + t2 + t3))};
    s.tempered = true;
    return s;
}

// Draws shaped like Ramanujan-progress sets: two conjugate pairs
// {r e^{i phi}, e^{i phi}/r} with radii capped at p^{THETA4} and the cross
// product r1 r2 capped at p^{THETA6}, so the degree-4 parameters respect the
// theta4 bound and all six exterior-square products respect theta6.
inline satake_set theta_bounded_satake(std::int64_t p, std::uint64_t seed) {
    rng r(seed * 0x94D049BB133111EBULL + static_cast<std::uint64_t>(p) * 0xD6E8FEB86659FD93ULL + 1);
    double lp = std::log(static_cast<double>(p));
    double r1 = std::exp(THETA4 * lp * r.uniform());
    double cap2 = std::min(THETA4 * lp, THETA6 * lp - std::log(r1));
    double r2 = std::exp(cap2 * r.uniform());
    double phi = r.uniform();
    satake_set s;
    s.p = p;
    cplx u = e_of(phi), v = e_of(-phi);
    s.alpha = {r1 * u, u / r1, r2 * v, v / r2};
    s.tempered = (r1 == 1.0 && r2 == 1.0);
    return s;
}

// Memoizing coefficient table over a local-parameter provider.  Queries
// factor the indices, evaluate one Schur polynomial per prime, and multiply.
// The memo cache is mutex-guarded until freeze(), after which lookups are
// lock-free and misses are computed without insertion.
class coefficient_table {
public:
    using key = std::tuple<std::int64_t, std::int64_t, std::int64_t>;

    explicit coefficient_table(std::function<satake_set(std::int64_t)> local,
                               std::int64_t index_budget = 1'000'000'000'000LL,
                               std::size_t cache_cap = 1 << 22)
        : local_(std::move(local)), index_budget_(index_budget), cache_cap_(cache_cap) {}

    static coefficient_table from_unitary_seed(std::uint64_t seed) {
        return coefficient_table(
            [seed](std::int64_t p) { return random_unitary_satake(p, seed); });
    }

    static coefficient_table from_theta_seed(std::uint64_t seed) {
        return coefficient_table(
            [seed](std::int64_t p) { return theta_bounded_satake(p, seed); });
    }

    satake_set local(std::int64_t p) const {
        {
            std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
            if (!frozen_) lk.lock();
            auto it = locals_.find(p);
            if (it != locals_.end()) return it->second;
        }
        satake_set s = local_(p);
        if (!frozen_) {
            std::lock_guard<std::mutex> lk(mutex_);
            locals_.emplace(p, s);
        }
        return s;
    }

    cplx coefficient(std::int64_t n1, std::int64_t n2, std::int64_t n3) const {
        if (n1 <= 0 || n2 <= 0 || n3 <= 0)
            throw constraint_error("coefficient: indices must be positive");
        if (n1 > index_budget_ / n2 || n1 * n2 > index_budget_ / n3)
            throw resource_error("coefficient: index product exceeds budget");

        key k{n1, n2, n3};
        {
            std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
            if (!frozen_) lk.lock();
            auto it = cache_.find(k);
            if (it != cache_.end()) return it->second;
        }

        cplx value = compute(n1, n2, n3);

        if (!frozen_) {
            std::lock_guard<std::mutex> lk(mutex_);
            if (cache_.size() < cache_cap_) cache_.emplace(k, value);
        }
        return value;
    }

    // Coefficient at a prime-power triple directly from exponents.
    cplx local_coefficient(std::int64_t p, int nu1, int nu2, int nu3) const {
        if (nu1 < 0 || nu2 < 0 || nu3 < 0) return {0.0, 0.0};
        if (nu1 == 0 && nu2 == 0 && nu3 == 0) return {1.0, 0.0};
        return schur_coefficient(local(p).alpha, nu1, nu2, nu3);
    }

    // After freezing, the table is immutable and safe to share.
    void freeze() {
        std::lock_guard<std::mutex> lk(mutex_);
        frozen_ = true;
    }

    // JSON object mapping "n1,n2,n3" to [re, im] for every memoized entry.
    nlohmann::ordered_json export_cache() const {
        std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
        if (!frozen_) lk.lock();
        nlohmann::ordered_json out = nlohmann::ordered_json::object();
        for (const auto& [k, v] : cache_) {
            std::string kk = std::to_string(std::get<0>(k)) + "," +
                             std::to_string(std::get<1>(k)) + "," +
                             std::to_string(std::get<2>(k));
            out[kk] = {v.real(), v.imag()};
        }
        return out;
    }

    std::size_t cache_size() const {
        std::unique_lock<std::mutex> lk(mutex_, std::defer_lock);
        if (!frozen_) lk.lock();
        return cache_.size();
    }

private:
    cplx compute(std::int64_t n1, std::int64_t n2, std::int64_t n3) const {
        // collect the primes of the index product
        std::map<std::int64_t, std::array<int, 3>> expo;
        std::int64_t ns[3] = {n1, n2, n3};
        for (int i = 0; i < 3; ++i)
            for (const auto& pp : factorize(ns[i])) expo[pp.p][static_cast<std::size_t>(i)] += pp.e;
        cplx value(1.0, 0.0);
        for (const auto& [p, nu] : expo)
            value *= schur_coefficient(local(p).alpha, nu[0], nu[1], nu[2]);
        return value;
    }

    std::function<satake_set(std::int64_t)> local_;
    std::int64_t index_budget_;
    std::size_t cache_cap_;
    mutable std::mutex mutex_;
    mutable std::map<key, cplx> cache_;
    mutable std::map<std::int64_t, satake_set> locals_;
    bool frozen_ = false;
};

// |LHS - RHS| / (1 + |LHS|) for the rank-one Hecke relation
//   A(p^a, p^b, p^c) = A(p^a,1,1) A(1,p^b,p^c) - A(p^{a-1},1,1) A(1,p^b,p^{c-1})
//                    - A(p^{a-1},1,1) A(1,p^{b-1},p^{c+1}) + A(p^{a-2},1,1) A(1,p^{b-1},p^c),
// where any factor with a negative exponent is zero.  This is a polynomial
// identity in the local parameters, so the residual is pure roundoff.
inline double verify_hecke_relation(const coefficient_table& table, std::int64_t p, int nu1,
                                    int nu2, int nu3) {
    auto A = [&](int a, int b, int c) -> cplx {
        if (a < 0 || b < 0 || c < 0) return {0.0, 0.0};
        return table.local_coefficient(p, a, b, c);
    };
    cplx lhs = A(nu1, nu2, nu3);
    cplx rhs = A(nu1, 0, 0) * A(0, nu2, nu3) - A(nu1 - 1, 0, 0) * A(0, nu2, nu3 - 1) -
               A(nu1 - 1, 0, 0) * A(0, nu2 - 1, nu3 + 1) +
               A(nu1 - 2, 0, 0) * A(0, nu2 - 1, nu3);
    return std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
}

// Worst Hecke-relation residual over all exponent triples with each
// nu_i <= nu_max, with local values memoized by exponent so the sweep costs
// one Schur evaluation per distinct triple rather than eight per relation.
inline double worst_hecke_residual(const coefficient_table& table, std::int64_t p, int nu_max) {
    const auto alpha = table.local(p).alpha;
    std::map<std::tuple<int, int, int>, cplx> memo;
    auto A = [&](int a, int b, int c) -> cplx {
        if (a < 0 || b < 0 || c < 0) return {0.0, 0.0};
        auto k = std::make_tuple(a, b, c);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        cplx v = schur_coefficient(alpha, a, b, c);
        memo.emplace(k, v);
        return v;
    };
    double worst = 0.0;
    for (int a = 0; a <= nu_max; ++a)
        for (int b = 0; b <= nu_max; ++b)
            for (int c = 0; c <= nu_max; ++c) {
                cplx lhs = A(a, b, c);
                cplx rhs = A(a, 0, 0) * A(0, b, c) - A(a - 1, 0, 0) * A(0, b, c - 1) -
                           A(a - 1, 0, 0) * A(0, b - 1, c + 1) +
                           A(a - 2, 0, 0) * A(0, b - 1, c);
                worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
            }
    return worst;
}

// Spectral data rows: `t, parity, p, lambda_p`, one row per prime, grouped
// into one gl2_maass record per distinct (t, parity).
inline std::vector<gl2_maass> parse_spectral_csv(const std::string& text) {
    std::vector<gl2_maass> out;
    std::map<std::pair<double, int>, std::size_t> index;

    auto fields_of = [](const std::string& line) {
        std::vector<std::string> f;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                f.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        f.push_back(cur);
        for (auto& s : f) {
            std::size_t b = s.find_first_not_of(" \t\r");
            std::size_t e = s.find_last_not_of(" \t\r");
            s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
        }
        return f;
    };

    long lineno = 0;
    std::size_t pos = 0;
    bool saw_header = false;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        auto f = fields_of(line);
        if (!saw_header) {
            if (f.size() != 4 || f[0] != "t" || f[1] != "parity" || f[2] != "p" ||
                f[3] != "lambda_p")
                throw parse_error("expected header 't, parity, p, lambda_p'", lineno);
            saw_header = true;
            continue;
        }
        if (f.size() != 4) throw parse_error("expected 4 comma-separated fields", lineno);

        double t, lam;
        long long parity, p;
        try {
            std::size_t used;
            t = std::stod(f[0], &used);
            if (used != f[0].size()) throw std::invalid_argument("trailing junk");
            parity = std::stoll(f[1], &used);
            if (used != f[1].size()) throw std::invalid_argument("trailing junk");
            p = std::stoll(f[2], &used);
            if (used != f[2].size()) throw std::invalid_argument("trailing junk");
            lam = std::stod(f[3], &used);
            if (used != f[3].size()) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw parse_error("malformed numeric field in row '" + line + "'", lineno);
        }
        if (parity != 0 && parity != 1) throw parse_error("parity must be 0 or 1", lineno);
        if (!is_prime(p)) throw parse_error("p=" + std::to_string(p) + " is not prime", lineno);

        auto key = std::make_pair(t, static_cast<int>(parity));
        auto it = index.find(key);
        if (it == index.end()) {
            index.emplace(key, out.size());
            gl2_maass m;
            m.t = t;
            m.parity = static_cast<int>(parity);
            out.push_back(m);
            it = index.find(key);
        }
        auto& rec = out[it->second];
        if (rec.lambda_p.count(p))
            throw parse_error("duplicate eigenvalue for p=" + std::to_string(p), lineno);
        rec.lambda_p[p] = lam;
    }
    if (!saw_header) throw parse_error("empty spectral file: missing header", 1);
    return out;
}

} // namespace gl4lab
