#pragma once

// Hankel transform of a dyadic test weight against a spectral kernel, plus
// the two scales that govern where the transform lives:
//
//   Omega_N(y, r) = N * integral over [1,2] of J(N x y) e(N x r) w(x) dx.
//
// For N y below the kernel's oscillation threshold this is a plain Fourier
// integral: it carries the size sqrt(N/y) and dies once N r grows.  Once
// N y is large the kernel splits into two oscillation branches; the branch
// whose phase N x r - 4 (N x y)^{1/4} can go stationary survives on the band
// y ~ N^3 r^4 with magnitude 1/(N r^2) and phase -3 (y/r)^{1/3}, and
// everything else is negligible.  verify_localization measures all of that
// on a log grid of arguments.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "gl4lab/bessel.hpp"
#include "gl4lab/errors.hpp"
#include "gl4lab/numutil.hpp"
#include "gl4lab/quadrature.hpp"
#include "gl4lab/weights.hpp"

namespace gl4lab {

// Reference bump repositioned to live on [lo, hi] inside the dyadic window
// [1, 2]; the translated and squeezed copies drive the degree-1 calibration
// across many weight choices.
struct bump_weight {
    double lo = 1.0;
    double hi = 2.0;

    bump_weight() = default;
    bump_weight(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(1.0 <= lo && lo < hi && hi <= 2.0))
            throw constraint_error("bump support must sit inside [1, 2]");
    }

    double value(double x) const {
        return test_weight::value(1.0 + (x - lo) / (hi - lo));
    }

    // Chain rule: the inner map has constant slope 1/(hi - lo).
    double derivative(double x, int j) const {
        return test_weight::derivative(1.0 + (x - lo) / (hi - lo), j) *
               std::pow(hi - lo, -j);
    }
};

// The small-argument cutoff N_flat and the stationary-band center N_natural
// for the dual sum, together with the modulus c and argument scale gamma
// that the variable change h = c n2 / (d1 d2) produces.  H stands in for the
// representative h of its dyadic block.
struct localization_scales {
    double n_flat = 0.0;
    double n_natural = 0.0;
    double c = 0.0;
    double gamma = 0.0;

    localization_scales(double H, double d1, double d2, double q, double N, double n2,
                        double tau, double T, double eps) {
        if (!(H > 0 && d1 > 0 && d2 > 0 && q > 0 && N > 0 && n2 > 0 && tau > 0 && T > 0))
            throw constraint_error("localization scales need positive inputs");
        double h4 = H * H * H * H;
        n_flat = std::pow(T, eps) * h4 * d1 * d2 * d2 / (N * n2 * n2);
        n_natural = N * N * N * n2 * n2 * std::pow(tau, 4) /
                    (d1 * d1 * d1 * d2 * d2 * std::pow(q, 4));
        c = d1 * d2 * H / n2;
        gamma = d1 * d2 * d2 * h4 / (n2 * n2);
    }
};

// Omega_N(y, r) with the kernel evaluated through its full dispatch (series
// inside the switch radius, fitted expansion outside).  `sign` selects the
// kernel branch J(+/- N x y); y itself stays positive.
template <class Kernel, class Weight>
cplx hankel_transform(const Kernel& kernel, const Weight& w, double N, double y, double r,
                      int sign = +1) {
    if (!(N > 0.0)) throw constraint_error("hankel transform needs N > 0");
    if (!(y > 0.0)) throw constraint_error("hankel transform needs y > 0");
    if (sign != 1 && sign != -1)
        throw constraint_error("hankel sign must be +1 or -1");

    // Cycle budget across the window: a degree-d kernel oscillates like
    // e(d (N x y)^{1/d}), contributing d (Ny)^{1/d} (2^{1/d} - 1) cycles,
    // and the Fourier factor another N |r|.
    const int d = kernel.degree();
    double cycles =
        d * std::pow(N * y, 1.0 / d) * (std::pow(2.0, 1.0 / d) - 1.0) + N * std::abs(r);
    long panels = std::max<long>(8, static_cast<long>(std::ceil(3.0 * cycles)) + 4);
    auto f = [&](double x) {
        return kernel(sign * N * x * y) * e_of(N * x * r) * w.value(x);
    };
    quad_result res = integrate_composite(f, 1.0, 2.0, 1e-12, 1e-10, panels, panels * 64);
    return N * res.value;
}

// One oscillation branch of the transform, rebuilt from the fitted
// large-argument expansion: `branch` = +/-1 selects the e(+-4 (N x y)^{1/4})
// phase.  Only meaningful when the whole weight support sits in the
// asymptotic regime, i.e. N y is past the switch point.
template <class Weight>
cplx hankel_branch(const bessel_kernel& kernel, const Weight& w, double N, double y, double r,
                   int branch) {
    const asymptotic_fit& fit = kernel.fit();
    if (!fit.ready()) throw resource_error("kernel expansion has not been calibrated");
    if (branch != 1 && branch != -1)
        throw constraint_error("branch must be +1 or -1");
    if (!(N * y >= kernel.switch_point()))
        throw constraint_error("branch split needs N y past the switch point");

    const int d = kernel.degree();
    const std::vector<cplx>& coef = branch > 0 ? fit.plus : fit.minus;
    double cycles =
        d * std::pow(N * y, 1.0 / d) * (std::pow(2.0, 1.0 / d) - 1.0) + N * std::abs(r);
    long panels = std::max<long>(8, static_cast<long>(std::ceil(3.0 * cycles)) + 4);
    auto f = [&](double x) {
        double u = N * x * y;
        double root = std::pow(u, 1.0 / d);
        cplx amp(0.0, 0.0);
        double damp = std::pow(u, -(d - 1) / (2.0 * d));
        for (int k = 0; k < fit.terms; ++k) {
            amp += coef[static_cast<std::size_t>(k)] * damp;
            damp /= root;
        }
        return amp * e_of(branch * d * root) * e_of(N * x * r) * w.value(x);
    };
    quad_result res = integrate_composite(f, 1.0, 2.0, 1e-12, 1e-10, panels, panels * 64);
    return N * res.value;
}

// Inert factor of the flat regime: Omega carries the bulk sqrt(N/y) when
// N y stays small, so this ratio is the part that must stay bounded and
// slowly varying there.
inline cplx flat_inert_factor(cplx omega, double N, double y) {
    if (!(N > 0.0 && y > 0.0))
        throw constraint_error("flat factor needs positive N and y");
    return omega * std::sqrt(y / N);
}

// One localization scenario: the weight block N, the Fourier parameter r
// (the t/(c q) of the dual sum), and the arithmetic inputs that set gamma
// and the band center.
struct localization_scenario {
    double N = 100.0;
    double r = 0.1;
    double d1 = 1.0, d2 = 1.0, n2 = 1.0, q = 1.0, h = 1.0;
    double T = 100.0, eps = 0.0;

    // Band geometry: the in-band region is [center/band_span,
    // center*band_span]; the negligibility gate is measured on the scan
    // tails [center/scan_span, center/gate_span] and symmetrically above.
    // The octave between band_span and gate_span is the transition shoulder:
    // |Omega| falls through it continuously, so no fixed small threshold can
    // hold right at the band boundary.
    double band_span = 8.0;
    double gate_span = 16.0;
    double scan_span = 64.0;
    int band_points = 170;
    int tail_points = 24;
};

struct localization_report {
    double n_flat = 0.0;
    double n_natural = 0.0;
    double c = 0.0;
    double gamma = 0.0;
    bool degenerate = false;   // band center below 1: nothing to scan
    double peak = 0.0;                 // max in-band |Omega|
    double out_of_band_ratio = 0.0;    // max out-of-band |Omega| / peak
    double plus_branch_ratio = 0.0;    // max in-band |Omega^{++}| / peak
    double phase_error = 0.0;          // max in-band phase deviation, cycles
    double phase_span = 0.0;           // total predicted phase travel, cycles
    double amplitude_const = 0.0;      // peak * N * r^2
    int points = 0;
};

// Scan the transform across the predicted band.  Checks performed here are
// measurements; the caller decides the thresholds.  The phase comparison
// unwraps arg Omega along the in-band grid and subtracts the predicted
// -3 (y/r)^{1/3}; what remains should be a near-constant from the inert
// amplitude factor, and its spread is reported in cycles.
inline localization_report verify_localization(const bessel_kernel& kernel,
                                               const localization_scenario& sc) {
    if (!(sc.r > 0.0)) throw constraint_error("scenario needs r > 0");
    if (sc.band_points < 8 || sc.tail_points < 2)
        throw constraint_error("scenario grids are too small");
    if (!(1.0 < sc.band_span && sc.band_span < sc.gate_span && sc.gate_span < sc.scan_span))
        throw constraint_error("scenario spans must be nested");

    localization_scales scales(sc.h, sc.d1, sc.d2, sc.q, sc.N, sc.n2,
                               sc.r * (sc.d1 * sc.d2 * sc.h / sc.n2) * sc.q, sc.T, sc.eps);
    localization_report rep;
    rep.n_flat = scales.n_flat;
    rep.n_natural = scales.n_natural;
    rep.c = scales.c;
    rep.gamma = scales.gamma;

    if (scales.n_natural < 1.0) {
        rep.degenerate = true;
        return rep;
    }

    const bump_weight w;
    auto omega_at = [&](double n) {
        return hankel_transform(kernel, w, sc.N, n / scales.gamma, sc.r);
    };

    // In-band sweep: magnitudes for the peak, values for the phase check.
    std::vector<double> ns(static_cast<std::size_t>(sc.band_points));
    std::vector<cplx> vals(ns.size());
    double lo = scales.n_natural / sc.band_span;
    double hi = scales.n_natural * sc.band_span;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        ns[i] = lo * std::pow(hi / lo, double(i) / double(ns.size() - 1));
        vals[i] = omega_at(ns[i]);
        rep.peak = std::max(rep.peak, std::abs(vals[i]));
        ++rep.points;
    }
    rep.amplitude_const = rep.peak * sc.N * sc.r * sc.r;

    // Out-of-band tails on both sides, clear of the transition shoulder.
    for (int side = 0; side < 2; ++side) {
        double a = side == 0 ? scales.n_natural / sc.scan_span
                             : scales.n_natural * sc.gate_span;
        double b = side == 0 ? scales.n_natural / sc.gate_span
                             : scales.n_natural * sc.scan_span;
        for (int i = 0; i <= sc.tail_points; ++i) {
            double n = a * std::pow(b / a, double(i) / sc.tail_points);
            rep.out_of_band_ratio =
                std::max(rep.out_of_band_ratio, std::abs(omega_at(n)) / rep.peak);
            ++rep.points;
        }
    }

    // The branch with phase N x r + 4 (N x y)^{1/4} never goes stationary;
    // measure it across the band against the same peak.
    for (std::size_t i = 0; i < ns.size(); i += 8) {
        cplx v = hankel_branch(kernel, w, sc.N, ns[i] / scales.gamma, sc.r, +1);
        rep.plus_branch_ratio = std::max(rep.plus_branch_ratio, std::abs(v) / rep.peak);
    }

    // Phase: unwrap measured arg Omega minus predicted -3 (y/r)^{1/3} along
    // the grid, then report the spread around the running offset.
    std::vector<double> resid(ns.size());
    double carry = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        double predicted = -3.0 * std::cbrt(ns[i] / (scales.gamma * sc.r));
        double measured = std::arg(vals[i]) / TWO_PI;
        double raw = measured - predicted;
        if (i > 0) carry += std::round(prev - (raw + carry));
        resid[i] = raw + carry;
        prev = resid[i];
    }
    double lo_r = resid[0], hi_r = resid[0];
    for (double v : resid) {
        lo_r = std::min(lo_r, v);
        hi_r = std::max(hi_r, v);
    }
    rep.phase_error = 0.5 * (hi_r - lo_r);
    rep.phase_span = 3.0 * (std::cbrt(hi / (scales.gamma * sc.r)) -
                            std::cbrt(lo / (scales.gamma * sc.r)));
    return rep;
}

}  // namespace gl4lab
