#pragma once

#include <cmath>
#include <vector>

#include "gl4lab/errors.hpp"

namespace gl4lab {

// Truncated Taylor expansion of a real-analytic function about a fixed point:
// c[k] holds f^(k)(x0)/k!.  Arithmetic follows the usual power-series
// recurrences.  The point of carrying jets instead of symbolic derivatives is
// the van der Corput operator D = d/dx (. / phi'): applying it A times only
// needs order-A jets of the weight and the phase derivative at each sample
// point, and every step below is exact up to rounding.
class jet {
public:
    explicit jet(int order) : c_(static_cast<std::size_t>(order) + 1, 0.0) {
        if (order < 0) throw constraint_error("jet: negative order");
    }

    static jet constant(double v, int order) {
        jet j(order);
        j.c_[0] = v;
        return j;
    }

    static jet variable(double x0, int order) {
        jet j(order);
        j.c_[0] = x0;
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
    double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
    double value() const { return c_[0]; }

    // f^(k)(x0), undoing the 1/k! storage convention.
    double deriv(int k) const {
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return c_[static_cast<std::size_t>(k)] * fact;
    }

    // Taylor coefficients of f', one order shorter.
    jet derivative() const {
        if (order() == 0) throw constraint_error("jet: derivative of order-0 jet");
        jet d(order() - 1);
        for (int k = 0; k <= d.order(); ++k) d[k] = (k + 1) * c_[static_cast<std::size_t>(k) + 1];
        return d;
    }

    friend jet operator+(const jet& a, const jet& b) {
        check_orders(a, b);
        jet r(a.order());
        for (int k = 0; k <= a.order(); ++k) r[k] = a[k] + b[k];
        return r;
    }

    friend jet operator-(const jet& a, const jet& b) {
        check_orders(a, b);
        jet r(a.order());
        for (int k = 0; k <= a.order(); ++k) r[k] = a[k] - b[k];
        return r;
    }

    friend jet operator-(const jet& a) {
        jet r(a.order());
        for (int k = 0; k <= a.order(); ++k) r[k] = -a[k];
        return r;
    }

    friend jet operator*(const jet& a, const jet& b) {
        check_orders(a, b);
        jet r(a.order());
        for (int k = 0; k <= a.order(); ++k) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
            r[k] = s;
        }
        return r;
    }

    friend jet operator*(double s, const jet& a) {
        jet r(a.order());
        for (int k = 0; k <= a.order(); ++k) r[k] = s * a[k];
        return r;
    }

    friend jet operator/(const jet& a, const jet& b) {
        check_orders(a, b);
        if (b[0] == 0.0) throw constraint_error("jet: division by jet with zero value");
        jet q(a.order());
        for (int k = 0; k <= a.order(); ++k) {
            double s = a[k];
            for (int j = 0; j < k; ++j) s -= q[j] * b[k - j];
            q[k] = s / b[0];
        }
        return q;
    }

private:
    static void check_orders(const jet& a, const jet& b) {
        if (a.order() != b.order()) throw constraint_error("jet: mixed orders");
    }

    std::vector<double> c_;
};

// g = exp(f), via g' = f' g:  k g_k = sum_{j=1..k} j f_j g_{k-j}.
inline jet jet_exp(const jet& f) {
    jet g(f.order());
    g[0] = std::exp(f[0]);
    for (int k = 1; k <= f.order(); ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * f[j] * g[k - j];
        g[k] = s / k;
    }
    return g;
}

// g = f^a for real a, f(x0) > 0, via g' f = a f' g.
inline jet jet_pow(const jet& f, double a) {
    if (f[0] <= 0.0) throw constraint_error("jet_pow: base must be positive at expansion point");
    jet g(f.order());
    g[0] = std::pow(f[0], a);
    // Matching coefficients in g' f = a f' g:
    //   k g_k f_0 = a sum_{m<k} (k-m) f_{k-m} g_m - sum_{0<m<k} (k-m) g_{k-m} f_m.
    for (int k = 1; k <= f.order(); ++k) {
        double s = 0.0;
        for (int m = 0; m < k; ++m) s += a * (k - m) * f[k - m] * g[m];
        for (int m = 1; m < k; ++m) s -= (k - m) * g[k - m] * f[m];
        g[k] = s / (k * f[0]);
    }
    return g;
}

inline jet jet_sqrt(const jet& f) { return jet_pow(f, 0.5); }

// g = log(f), f(x0) > 0, via g' = f'/f.
inline jet jet_log(const jet& f) {
    if (f[0] <= 0.0) throw constraint_error("jet_log: argument must be positive at expansion point");
    jet g(f.order());
    g[0] = std::log(f[0]);
    for (int k = 1; k <= f.order(); ++k) {
        double s = k * f[k];
        for (int j = 1; j < k; ++j) s -= j * g[j] * f[k - j];
        g[k] = s / (k * f[0]);
    }
    return g;
}

} // namespace gl4lab
