#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gl4lab/errors.hpp"
#include "gl4lab/hecke.hpp"
#include "gl4lab/numutil.hpp"

namespace gl4lab {

// The two Ramanujan-progress exponents, kept as exact rationals: 9/22 on the
// degree-4 parameters, 35/74 on the exterior-square (degree-6) parameters.
struct rational {
    long num = 0, den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct theta_exponents {
    rational theta4{9, 22};
    rational theta6{35, 74};
};

enum class inequality_id {
    kim_sarnak_binomial,
    kim_sarnak_weak,
    lrs_binomial,
    individual_full,
    individual_mid_row,
    individual_mid_plane,
    avg_ext_square,
    avg_twisted,
    weil_classical,
};

inline const char* inequality_name(inequality_id id) {
    switch (id) {
        case inequality_id::kim_sarnak_binomial: return "kim_sarnak_binomial";
        case inequality_id::kim_sarnak_weak: return "kim_sarnak_weak";
        case inequality_id::lrs_binomial: return "lrs_binomial";
        case inequality_id::individual_full: return "individual_full";
        case inequality_id::individual_mid_row: return "individual_mid_row";
        case inequality_id::individual_mid_plane: return "individual_mid_plane";
        case inequality_id::avg_ext_square: return "avg_ext_square";
        case inequality_id::avg_twisted: return "avg_twisted";
        case inequality_id::weil_classical: return "weil_classical";
    }
    return "unknown";
}

struct bound_witness {
    std::int64_t p = 0;
    std::uint64_t draw = 0;
    int nu1 = 0, nu2 = 0, nu3 = 0;
};

struct bound_check_result {
    inequality_id id{};
    double worst_ratio = 0.0;   // sup |A| / bound over the declared sweep
    double strict_ratio = 0.0;  // sup over the sub-sweep where strictness is claimed
    bound_witness witness{};    // attains worst_ratio
    bool passed = false;        // worst_ratio <= 1 + 1e-9
    bool strictly_below = false; // strict_ratio < 1
    double cross_residual = 0.0; // worst disagreement between independent value routes

    void finalize() {
        passed = worst_ratio <= 1.0 + 1e-9;
        strictly_below = strict_ratio < 1.0;
    }
};

namespace detail {

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline std::uint64_t draw_seed(std::uint64_t base, std::uint64_t d) {
    return base + 1000003ULL * (d + 1);
}

struct ratio_tracker {
    double worst = 0.0, strict_worst = 0.0;
    bound_witness witness{};

    void feed(double ratio, bool strict_zone, std::int64_t p, std::uint64_t d, int a, int b,
              int c) {
        if (ratio > worst) {
            worst = ratio;
            witness = {p, d, a, b, c};
        }
        if (strict_zone && ratio > strict_worst) strict_worst = ratio;
    }

    bound_check_result result(inequality_id id) const {
        bound_check_result r;
        r.id = id;
        r.worst_ratio = worst;
        r.strict_ratio = strict_worst;
        r.witness = witness;
        r.finalize();
        return r;
    }
};

} // namespace detail

// |A(p^nu,1,1)| against the binomial bound C(nu+3,3) p^{theta4 nu} (and the
// weaker (nu+1)^3/2 form, which is only claimed for nu >= 1).  The binomial
// bound is met with equality at nu = 0, strictly below 1 beyond.
inline std::vector<bound_check_result> check_kim_sarnak(std::int64_t p, int nu_max, int draws,
                                                        std::uint64_t seed) {
    detail::ratio_tracker binomial, weak;
    for (int d = 0; d < draws; ++d) {
        auto s = theta_bounded_satake(p, detail::draw_seed(seed, static_cast<std::uint64_t>(d)));
        auto h = detail::complete_homogeneous(s.alpha, nu_max);
        for (int nu = 0; nu <= nu_max; ++nu) {
            double val = std::abs(h[static_cast<std::size_t>(nu)]);
            double pw = std::pow(static_cast<double>(p), THETA4 * nu);
            binomial.feed(val / (detail::binom(nu + 3, 3) * pw), nu >= 1, p,
                          static_cast<std::uint64_t>(d), nu, 0, 0);
            if (nu >= 1) {
                double cube = (nu + 1.0) * (nu + 1.0) * (nu + 1.0) / 2.0;
                weak.feed(val / (cube * pw), true, p, static_cast<std::uint64_t>(d), nu, 0, 0);
            }
        }
    }
    return {binomial.result(inequality_id::kim_sarnak_binomial),
            weak.result(inequality_id::kim_sarnak_weak)};
}

// |A(1,p^nu,1)| against C(nu+5,5) p^{theta6 nu} + C(nu+3,5) p^{theta6 (nu-2)}.
// The value route is the zeta-corrected exterior-square coefficient
// h_nu - h_{nu-2} in the six pairwise products; the Schur route
// s_{(nu,nu,0,0)} is evaluated alongside and the worst disagreement is
// reported in cross_residual.
inline std::vector<bound_check_result> check_lrs_exterior(std::int64_t p, int nu_max, int draws,
                                                          std::uint64_t seed) {
    detail::ratio_tracker tracker;
    double cross = 0.0;
    for (int d = 0; d < draws; ++d) {
        auto s = theta_bounded_satake(p, detail::draw_seed(seed, static_cast<std::uint64_t>(d)));
        local_schur_evaluator schur(s.alpha, 2 * nu_max);
        for (int nu = 0; nu <= nu_max; ++nu) {
            cplx via_ext = middle_coefficient_via_ext_square(s.alpha, nu);
            cplx via_schur = schur(0, nu, 0);
            cross = std::max(cross,
                             std::abs(via_ext - via_schur) / (1.0 + std::abs(via_schur)));
            double bound = detail::binom(nu + 5, 5) * std::pow(static_cast<double>(p), THETA6 * nu);
            if (nu >= 2)
                bound += detail::binom(nu + 3, 5) *
                         std::pow(static_cast<double>(p), THETA6 * (nu - 2));
            tracker.feed(std::abs(via_ext) / bound, nu >= 1, p, static_cast<std::uint64_t>(d), 0,
                         nu, 0);
        }
    }
    auto r = tracker.result(inequality_id::lrs_binomial);
    r.cross_residual = cross;
    return {r};
}

// The three-layer pointwise bound sweep:
//   full:      |A(p^{n1},p^{n2},p^{n3})| < (n1+1)^3 (n2+1)^6 (n3+1)^3 p^{t4 n1 + t6 n2 + t4 n3}
//              for n1+n2+n3 >= 1 (the trivial triple meets it with equality 1/1
//              only in degenerate normalizations and is excluded, as the bound
//              is only claimed for index product > 1);
//   mid_row:   |A(p, p^nu, 1)|      < (nu+1)^6/2 p^{t4 + t6 nu},  nu >= 1;
//   mid_plane: |A(p^{n1},p^{n2},1)| < (n1^3+3 n1)(n2+1)^6/2 p^{t4 n1 + t6 n2},  n1,n2 >= 1.
// The mid layers are genuinely false at nu = 0 (e.g. |A(p,1,1)| can reach
// ~4.08 > 2 p^{theta4} at p = 2), so their sweeps start at 1.
inline std::vector<bound_check_result> check_individual_bound(std::int64_t p, int nu_max,
                                                              int draws, std::uint64_t seed) {
    detail::ratio_tracker full, mid_row, mid_plane;
    const double lp = static_cast<double>(p);
    for (int d = 0; d < draws; ++d) {
        auto s = theta_bounded_satake(p, detail::draw_seed(seed, static_cast<std::uint64_t>(d)));
        local_schur_evaluator schur(s.alpha, 3 * nu_max);
        for (int n1 = 0; n1 <= nu_max; ++n1)
            for (int n2 = 0; n2 <= nu_max; ++n2)
                for (int n3 = 0; n3 <= nu_max; ++n3) {
                    if (n1 + n2 + n3 == 0) continue;
                    double val = std::abs(schur(n1, n2, n3));
                    double cube1 = (n1 + 1.0) * (n1 + 1.0) * (n1 + 1.0);
                    double cube3 = (n3 + 1.0) * (n3 + 1.0) * (n3 + 1.0);
                    double six2 = std::pow(n2 + 1.0, 6.0);
                    double bound = cube1 * six2 * cube3 *
                                   std::pow(lp, THETA4 * n1 + THETA6 * n2 + THETA4 * n3);
                    full.feed(val / bound, true, p, static_cast<std::uint64_t>(d), n1, n2, n3);

                    if (n1 == 1 && n3 == 0 && n2 >= 1) {
                        double b = six2 / 2.0 * std::pow(lp, THETA4 + THETA6 * n2);
                        mid_row.feed(val / b, true, p, static_cast<std::uint64_t>(d), n1, n2, n3);
                    }
                    if (n3 == 0 && n1 >= 1 && n2 >= 1) {
                        double poly = static_cast<double>(n1) * n1 * n1 + 3.0 * n1;
                        double bb = poly * six2 / 2.0 * std::pow(lp, THETA4 * n1 + THETA6 * n2);
                        mid_plane.feed(val / bb, true, p, static_cast<std::uint64_t>(d), n1, n2,
                                       n3);
                    }
                }
    }
    return {full.result(inequality_id::individual_full),
            mid_row.result(inequality_id::individual_mid_row),
            mid_plane.result(inequality_id::individual_mid_plane)};
}

// Mean-square dials and the positivity/multiplicativity splitting argument.
struct average_bound_report {
    double ext_square_sum = 0.0;   // sum_{n1<=X1, n2<=X2} |A(n1,n2,1)|^2
    double ext_square_ratio = 0.0; // against (X1 X2)^{1+eps}
    double twisted_sum = 0.0;      // sum_{n<=X} |A(n,a2,a3)|^2
    double twisted_ratio = 0.0;    // against a2^{35/37+eps} a3^{9/11+eps} X
    double partition_residual = 0.0; // exact smooth/coprime split, relative
    bool termwise_ok = false;        // every coprime inner sum <= relaxed inner sum
    double chain_lhs = 0.0, chain_rhs = 0.0;
};

inline average_bound_report check_average_bounds(const coefficient_table& table, std::int64_t X1,
                                                 std::int64_t X2, std::int64_t X, std::int64_t a2,
                                                 std::int64_t a3, double eps = 0.1) {
    average_bound_report rep;

    for (std::int64_t n1 = 1; n1 <= X1; ++n1)
        for (std::int64_t n2 = 1; n2 <= X2; ++n2)
            rep.ext_square_sum += std::norm(table.coefficient(n1, n2, 1));
    rep.ext_square_ratio =
        rep.ext_square_sum / std::pow(static_cast<double>(X1) * static_cast<double>(X2), 1.0 + eps);

    for (std::int64_t n = 1; n <= X; ++n)
        rep.twisted_sum += std::norm(table.coefficient(n, a2, a3));
    rep.twisted_ratio = rep.twisted_sum /
                        (std::pow(static_cast<double>(a2), 35.0 / 37.0 + eps) *
                         std::pow(static_cast<double>(a3), 9.0 / 11.0 + eps) *
                         static_cast<double>(X));

    // Splitting n = m n' with m the (a2 a3)-smooth part: exact partition of
    // the twisted sum, then termwise relaxation by dropping coprimality.
    std::vector<std::int64_t> smooth_primes;
    for (const auto& pp : factorize(a2 * a3)) smooth_primes.push_back(pp.p);

    std::vector<std::int64_t> smooth_parts{1};
    for (std::size_t i = 0; i < smooth_parts.size(); ++i)
        for (std::int64_t q : smooth_primes)
            if (smooth_parts[i] <= X / q) smooth_parts.push_back(smooth_parts[i] * q);
    std::sort(smooth_parts.begin(), smooth_parts.end());
    smooth_parts.erase(std::unique(smooth_parts.begin(), smooth_parts.end()), smooth_parts.end());

    auto coprime_to_smooth = [&](std::int64_t n) {
        for (std::int64_t q : smooth_primes)
            if (n % q == 0) return false;
        return true;
    };

    double partition_sum = 0.0;
    bool termwise = true;
    double relaxed_total = 0.0;
    for (std::int64_t m : smooth_parts) {
        double inner_coprime = 0.0, inner_full = 0.0;
        for (std::int64_t n = 1; n <= X / m; ++n) {
            double w = std::norm(table.coefficient(n, 1, 1));
            inner_full += w;
            if (coprime_to_smooth(n)) inner_coprime += w;
        }
        double head = std::norm(table.coefficient(m, a2, a3));
        partition_sum += head * inner_coprime;
        relaxed_total += head * inner_full;
        if (inner_coprime > inner_full * (1.0 + 1e-12)) termwise = false;
    }
    rep.partition_residual =
        std::abs(partition_sum - rep.twisted_sum) / (1.0 + rep.twisted_sum);
    rep.termwise_ok = termwise;
    rep.chain_lhs = rep.twisted_sum;
    rep.chain_rhs = relaxed_total;
    return rep;
}

} // namespace gl4lab
