#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "gl4lab/errors.hpp"
#include "gl4lab/jets.hpp"

namespace gl4lab {

// Reference bump: nu(x) = exp(1 - 1/(1 - u^2)) with u = 2x - 3, supported on
// (1, 2), peak value 1 at x = 3/2.  All derivatives vanish at the endpoints,
// and x^j nu^(j)(x) stays bounded uniformly in j up to the orders used here,
// so the family is "inert" in the sense the summation formulas require.
class test_weight {
public:
    static double value(double x) {
        double u = 2.0 * x - 3.0;
        if (u <= -1.0 || u >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - u * u));
    }

    // j-th derivative in x, computed from the closed-form recurrence for
    // f(u) = -1/(1-u^2):  f^(j)(u) = P_j(u)/(1-u^2)^{j+1} with P_0 = -1 and
    // P_{j+1} = P_j'(u)(1-u^2) + 2(j+1) u P_j(u), then Leibniz for
    // nu = exp(1 + f) through nu' = f' nu, and the chain rule factor 2^j.
    static double derivative(double x, int j) {
        if (j < 0) throw constraint_error("test_weight: negative derivative order");
        if (j == 0) return value(x);
        double u = 2.0 * x - 3.0;
        if (u <= -1.0 || u >= 1.0) return 0.0;

        // P_1 .. P_j as coefficient vectors in u.
        std::vector<std::vector<double>> P(static_cast<std::size_t>(j) + 1);
        P[0] = {-1.0};
        for (int m = 0; m < j; ++m) {
            const auto& p = P[static_cast<std::size_t>(m)];
            std::vector<double> q(p.size() + 1, 0.0);
            // P_m'(u) (1 - u^2)
            for (std::size_t k = 1; k < p.size(); ++k) {
                q[k - 1] += static_cast<double>(k) * p[k];
                q[k + 1] -= static_cast<double>(k) * p[k];
            }
            // + 2 (m+1) u P_m(u)
            for (std::size_t k = 0; k < p.size(); ++k) q[k + 1] += 2.0 * (m + 1) * p[k];
            P[static_cast<std::size_t>(m) + 1] = q;
        }

        double w = 1.0 - u * u;
        std::vector<double> f_der(static_cast<std::size_t>(j) + 1); // f^(m)(u)
        f_der[0] = -1.0 / w;
        double wpow = w;
        for (int m = 1; m <= j; ++m) {
            wpow *= w;
            double pv = 0.0;
            const auto& p = P[static_cast<std::size_t>(m)];
            for (std::size_t k = p.size(); k-- > 0;) pv = pv * u + p[k];
            f_der[static_cast<std::size_t>(m)] = pv / wpow;
        }

        // nu^(m+1) = sum_k C(m,k) f^(k+1) nu^(m-k), seeded with nu^(0).
        std::vector<double> nu_der(static_cast<std::size_t>(j) + 1);
        nu_der[0] = std::exp(1.0 + f_der[0]);
        for (int m = 0; m < j; ++m) {
            double s = 0.0;
            double binom = 1.0;
            for (int k = 0; k <= m; ++k) {
                s += binom * f_der[static_cast<std::size_t>(k) + 1] *
                     nu_der[static_cast<std::size_t>(m - k)];
                binom = binom * (m - k) / (k + 1);
            }
            nu_der[static_cast<std::size_t>(m) + 1] = s;
        }

        return nu_der[static_cast<std::size_t>(j)] * std::pow(2.0, j);
    }

    // Taylor jet at x, for the certified integration-by-parts envelopes.
    static jet at(double x, int order) {
        double u0 = 2.0 * x - 3.0;
        if (u0 <= -1.0 || u0 >= 1.0) return jet(order); // identically zero locally
        jet u = jet::variable(x, order);
        jet uu = 2.0 * u - jet::constant(3.0, order);
        jet arg = jet::constant(1.0, order) -
                  jet::constant(1.0, order) / (jet::constant(1.0, order) - uu * uu);
        return jet_exp(arg);
    }
};

// C-infinity step: 0 for v <= 0, 1 for v >= 1, strictly increasing between.
inline double smooth_step(double v) {
    auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    double a = f(v), b = f(1.0 - v);
    return a / (a + b);
}

// Window that is 1 on [lo, hi] and decays smoothly to 0 outside, reaching 0
// at lo/2 and 2*hi.  Used to truncate long sums without ringing.
inline double smooth_window(double x, double lo, double hi) {
    if (x <= 0.5 * lo || x >= 2.0 * hi) return 0.0;
    double left = smooth_step((x - 0.5 * lo) / (0.5 * lo));
    double right = smooth_step((2.0 * hi - x) / hi);
    return left * right;
}

// sup over the support of |x^j w^(j)(x)| for j = 0..max_order, sampled on a
// uniform grid.  Certifies numerically that a weight family is inert with a
// modest constant.
template <class DerivFn>
std::vector<double> inert_norms(const DerivFn& deriv, double lo, double hi, int max_order,
                                int samples = 4000) {
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (int i = 0; i <= samples; ++i) {
        double x = lo + (hi - lo) * i / samples;
        double xp = 1.0;
        for (int j = 0; j <= max_order; ++j) {
            double v = std::abs(xp * deriv(x, j));
            if (v > out[static_cast<std::size_t>(j)]) out[static_cast<std::size_t>(j)] = v;
            xp *= x;
        }
    }
    return out;
}

} // namespace gl4lab
