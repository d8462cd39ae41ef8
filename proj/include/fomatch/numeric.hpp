#pragma once

// Root finding and adaptive quadrature used by the closed-form analysis.

#include <cmath>
#include <string>
#include "fomatch/errors.hpp"

namespace fomatch {

// Bisection for a decreasing-or-increasing continuous fn on [lo, hi].
// Runs to fixed-point resolution (mid collides with an endpoint) or
// max_iter, whichever first.  Caller guarantees a sign change.
template <typename F>
double bisect(F&& fn, double lo, double hi, int max_iter = 200) {
    double flo = fn(lo);
    bool decreasing = flo > 0.0;
    for (int it = 0; it < max_iter; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = fn(mid);
        if ((fm > 0.0) == decreasing) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Newton with guaranteed-diagnostic failure: throws if not converged.
template <typename F, typename DF>
double newton(F&& fn, DF&& dfn, double x0, double tol = 1e-15, int max_iter = 100) {
    double x = x0;
    for (int it = 0; it < max_iter; ++it) {
        double fx = fn(x);
        double step = fx / dfn(x);
        x -= step;
        if (std::abs(step) <= tol * (1.0 + std::abs(x))) return x;
    }
    throw domain_error("newton: no convergence from x0=" + std::to_string(x0));
}

// Neumaier compensated summation.  Plain accumulation of n terms drifts by
// ~n*eps*magnitude, which at 1e5+ edges exceeds the 1e-9 budget the dual
// certificate is held to; compensation keeps the error at a few ulps total.
struct neumaier_sum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
        else                            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

namespace detail {

inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_rec(F&& fn, double a, double m, double b,
                    double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = fn(lm), frm = fn(rm);
    if (!std::isfinite(flm) || !std::isfinite(frm))
        throw quadrature_failure("adaptive_simpson: non-finite integrand value");
    double left = simpson(a, m, fa, flm, fm);
    double right = simpson(m, b, fm, frm, fb);
    double delta = left + right - whole;
    // Accept on the Richardson estimate, or unconditionally once the
    // interval is below float64 resolution for the integrands we meet
    // (tolerance halving alone never terminates near a square-root
    // singularity that has been substituted away imperfectly).
    if (std::abs(delta) <= 15.0 * tol || (b - a) < 1e-13)
        return left + right + delta / 15.0;
    if (depth <= 0)
        throw quadrature_failure("adaptive_simpson: depth exhausted");
    double half_tol = std::max(0.5 * tol, 1e-16);
    return adaptive_rec(fn, a, lm, m, fa, flm, fm, left, half_tol, depth - 1)
         + adaptive_rec(fn, m, rm, b, fm, frm, fb, right, half_tol, depth - 1);
}

} // namespace detail

template <typename F>
double adaptive_simpson(F&& fn, double a, double b,
                        double tol = 1e-12, int max_depth = 50) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = fn(a), fm = fn(m), fb = fn(b);
    if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
        throw quadrature_failure("adaptive_simpson: non-finite integrand value");
    double whole = detail::simpson(a, b, fa, fm, fb);
    return detail::adaptive_rec(fn, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace fomatch
