#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "gl4lab/errors.hpp"
#include "gl4lab/jets.hpp"
#include "gl4lab/numutil.hpp"
#include "gl4lab/quadrature.hpp"
#include "gl4lab/weights.hpp"

namespace gl4lab {

// Measured inertness data for a weight on an interval: constants[j] is the
// sampled sup of |x^j w^(j)(x)| / X^j.  A weight behaves like an X-inert
// function when all of these stay below a modest ceiling.
struct inert_profile {
    double scale = 1.0;
    double lo = 0.0, hi = 0.0;
    std::vector<double> constants;

    double worst() const {
        double m = 0.0;
        for (double c : constants) m = std::max(m, c);
        return m;
    }
    bool is_inert(double ceiling) const {
        for (double c : constants)
            if (!(c <= ceiling)) return false;
        return true;
    }
};

// deriv: callable (x, j) -> complex value of w^(j)(x).  Sampling is dense and
// uniform; the callers pass analytically differentiated weights, so there is
// no step-size instability to worry about here.
template <class Deriv>
inert_profile measure_inert(const Deriv& deriv, double X, double lo, double hi, int max_order,
                            int samples = 1200) {
    if (!(X >= 1.0)) throw constraint_error("measure_inert: scale X must be >= 1");
    if (!(hi > lo)) throw constraint_error("measure_inert: empty sample box");
    inert_profile prof;
    prof.scale = X;
    prof.lo = lo;
    prof.hi = hi;
    prof.constants.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (int i = 0; i <= samples; ++i) {
        double x = lo + (hi - lo) * i / samples;
        double xp = 1.0, Xp = 1.0;
        for (int j = 0; j <= max_order; ++j) {
            double v = std::abs(xp * cplx(deriv(x, j))) / Xp;
            prof.constants[static_cast<std::size_t>(j)] =
                std::max(prof.constants[static_cast<std::size_t>(j)], v);
            xp *= x;
            Xp *= X;
        }
    }
    return prof;
}

// The fixed bump rescaled to live on [rho, 2*rho]: w(x) = nu(x/rho).
class scaled_bump {
public:
    explicit scaled_bump(double rho) : rho_(rho) {
        if (!(rho > 0.0)) throw constraint_error("scaled_bump: rho must be positive");
    }

    double rho() const { return rho_; }
    double lo() const { return rho_; }
    double hi() const { return 2.0 * rho_; }

    double value(double x) const { return test_weight::value(x / rho_); }
    double derivative(double x, int j) const {
        return test_weight::derivative(x / rho_, j) * std::pow(rho_, -j);
    }
    jet at(double x, int order) const {
        jet t = test_weight::at(x / rho_, order);
        double f = 1.0;
        for (int k = 1; k <= order; ++k) {
            f /= rho_;
            t[k] *= f;
        }
        return t;
    }

private:
    double rho_;
};

namespace detail {

// phi(x) = x + sign * gamma * x^{1/gamma}; total variation bound used to seed
// the oscillation-resolving panel count.
inline double phase_variation(double gamma, double rho) {
    return rho + gamma * (std::pow(2.0 * rho, 1.0 / gamma) - std::pow(rho, 1.0 / gamma));
}

inline jet truncated(const jet& a, int order) {
    jet r(order);
    for (int k = 0; k <= order; ++k) r[k] = a[k];
    return r;
}

} // namespace detail

// I^(sign)(lambda) = integral over [rho, 2 rho] of
// e(lambda (x + sign gamma x^{1/gamma})) nu(x/rho) dx.
inline quad_result stationary_integral(double gamma, double lam, double rho, int sign) {
    if (!(gamma > 1.0)) throw constraint_error("stationary_integral: gamma must exceed 1");
    if (!(lam > 0.0) || !(rho > 0.0))
        throw constraint_error("stationary_integral: lambda and rho must be positive");
    if (sign != 1 && sign != -1) throw constraint_error("stationary_integral: sign must be +-1");
    scaled_bump w(rho);
    const double s = sign;
    auto f = [&](double x) { return e_of(lam * (x + s * gamma * std::pow(x, 1.0 / gamma))) * w.value(x); };
    long panels = static_cast<long>(std::ceil(2.2 * lam * detail::phase_variation(gamma, rho))) + 16;
    // The summed per-panel error estimates bottom out near machine epsilon
    // times the panel count, so the achievable absolute accuracy degrades
    // (slowly) with the oscillation budget.
    double abs_tol = std::max(1e-13 * std::max(rho, 1.0), 1.2e-15 * static_cast<double>(panels));
    return integrate_composite(f, w.lo(), w.hi(), abs_tol, 1e-9, panels);
}

// lambda-free part of the certified integration-by-parts envelope:
// the L1 norm of D^A w on [rho, 2 rho] where D(u) = (u / phi')' and
// phi'(x) = 1 + sign x^{1/gamma - 1}.  Each application of D is exact through
// order-(A+1) jets, so the resulting bound |I| <= (2 pi lambda)^{-A} * norm
// is a rigorous envelope rather than a heuristic.
inline double ibp_weight_norm(double gamma, double rho, int sign, int A) {
    if (A < 0) throw constraint_error("ibp_weight_norm: negative order");
    scaled_bump w(rho);
    const double s = sign;
    const double expo = 1.0 / gamma - 1.0;
    // The envelope needs phi' bounded away from zero on the window.
    for (int i = 0; i <= 64; ++i) {
        double x = w.lo() + (w.hi() - w.lo()) * i / 64.0;
        if (std::abs(1.0 + s * std::pow(x, expo)) < 1e-3)
            throw constraint_error("ibp_weight_norm: phase derivative vanishes on the window");
    }
    auto dAw = [&](double x) {
        jet u = w.at(x, A + 1);
        jet pd = jet::constant(1.0, A + 1) + s * jet_pow(jet::variable(x, A + 1), expo);
        for (int step = 0; step < A; ++step) {
            jet q = u / detail::truncated(pd, u.order());
            u = q.derivative();
        }
        return std::abs(u.value());
    };
    auto r = integrate_real(dAw, w.lo(), w.hi(), 1e-13, 1e-8, 64);
    return r.value.real();
}

inline double ibp_bound(double gamma, double lam, double rho, int sign, int A) {
    return std::pow(TWO_PI * lam, -A) * ibp_weight_norm(gamma, rho, sign, A);
}

// Best certified envelope over IBP depths up to max_A; norms can be computed
// once by the caller and reused across lambda.
inline double ibp_best_bound(double lam, const std::vector<double>& weight_norms) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t A = 0; A < weight_norms.size(); ++A)
        best = std::min(best, std::pow(TWO_PI * lam, -static_cast<double>(A)) * weight_norms[A]);
    return best;
}

// Reference decay envelope rho (X / (lambda (rho + rho^{1/gamma})))^A against
// which the measured integrals are compared.
inline double reference_decay_bound(double gamma, double lam, double rho, double X, int A) {
    return rho * std::pow(X / (lam * (rho + std::pow(rho, 1.0 / gamma))), A);
}

// For the minus sign the phase x - gamma x^{1/gamma} has a critical point at
// x = 1 with value 1 - gamma, which sits inside [rho, 2 rho] exactly when
// 1/2 < rho < 1.  Removing the critical phase and the square-root amplitude
// leaves a quantity that varies slowly in lambda:
//   v(lambda) = e(lambda (gamma - 1)) sqrt(lambda) I^-(lambda).
inline cplx extracted_inert_factor(double gamma, double lam, double rho) {
    quad_result I = stationary_integral(gamma, lam, rho, -1);
    return e_of(lam * (gamma - 1.0)) * std::sqrt(lam) * I.value;
}

// lambda d/dlambda via central differences in log lambda.
template <class F>
cplx log_derivative(const F& f, double lam, double step = 1e-3) {
    cplx hi = f(lam * std::exp(step));
    cplx lo = f(lam * std::exp(-step));
    return (hi - lo) / (2.0 * step);
}

} // namespace gl4lab
