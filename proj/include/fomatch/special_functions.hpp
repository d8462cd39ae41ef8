#pragma once

// The closed-form strictly decreasing profile f on [0, 2-√2], its numeric
// inverse τ, and the induced decreasing map h(x) = f(c - τ(x)) that drives
// the adversarial instance family, together with quadrature verification of
// the integral identities the limiting ratio rests on.

#include <algorithm>
#include <cmath>
#include <string>

#include "fomatch/constants.hpp"
#include "fomatch/errors.hpp"
#include "fomatch/numeric.hpp"

namespace fomatch {

class special_functions {
public:
    special_functions()
        : c_(water_ratio()),
          const_term_(0.5 * (2.0 + std::sqrt(2.0) - std::log(1.0 - water_ratio()))) {}

    double c() const { return c_; }

    // f(x) = ½(ln(1-x) + ln(1-c+x)) + 1/(√2(x-1)) + (2+√2-ln(1-c))/2,
    // strictly decreasing with f(0) = 1 and f(c) = 0.
    double f(double x) const {
        x = clamp_domain(x, 0.0, c_, "f");
        return 0.5 * (std::log1p(-x) + std::log(1.0 - c_ + x))
             + 1.0 / (std::sqrt(2.0) * (x - 1.0)) + const_term_;
    }

    double f_prime(double x) const {
        x = clamp_domain(x, 0.0, c_, "f_prime");
        return 0.5 * (-1.0 / (1.0 - x) + 1.0 / (1.0 - c_ + x))
             - 1.0 / (std::sqrt(2.0) * (x - 1.0) * (x - 1.0));
    }

    // τ = f⁻¹ by bisection.  The endpoint clamps make τ(1) = 0 and τ(0) = c
    // exact: f is quadratically flat at 0 (f'(0) = 0), so bisection alone
    // cannot resolve the inverse there, and h(1) = 0 depends on it.
    double tau(double y) const {
        y = clamp_domain(y, 0.0, 1.0, "tau");
        if (y >= 1.0) return 0.0;
        if (y <= 0.0) return c_;
        return bisect([this, y](double x) { return f(x) - y; }, 0.0, c_);
    }

    double h(double x) const {
        x = clamp_domain(x, 0.0, 1.0, "h");
        return f(c_ - tau(x));
    }

    // Inverse of the decreasing h on [0,1].
    double h_inv(double y) const {
        y = clamp_domain(y, 0.0, 1.0, "h_inv");
        if (y >= 1.0) return 0.0;
        if (y <= 0.0) return 1.0;
        return bisect([this, y](double x) { return h(x) - y; }, 0.0, 1.0);
    }

private:
    static double clamp_domain(double v, double lo, double hi, const char* who) {
        if (!(v >= lo - 1e-9 && v <= hi + 1e-9))
            throw domain_error(std::string(who) + ": argument " + std::to_string(v) +
                               " outside [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + "]");
        return std::min(std::max(v, lo), hi);
    }

    double c_;
    double const_term_;
};

struct residual_report {
    std::string identity;
    int grid = 0;
    double max_residual = 0.0;
    double value = 0.0;     // reported magnitude for bound-type checks
    double tol = 0.0;
    bool pass = false;
};

struct tau_integral_report {
    residual_report cumulative;   // ∫₀ˣ (1-τ)/(1-y+h) dy = c - τ(x) on a grid
    residual_report total_mass;   // ∫₀¹ τ dy = 1 - c
    residual_report unit_bound;   // ∫₀¹ dy/(1-y+h) < 1, value reported
    bool pass = false;
};

// Quadrature check of the three τ/h integral identities.  The integrands
// behave like 1/√(1-y) near y = 1, so everything is computed under the
// substitution y = 1-s², with the cumulative identity accumulated segment
// by segment over the descending s-grid.
inline tau_integral_report verify_tau_integrals(const special_functions& sf,
                                                int grid = 200, double tol = 1e-6) {
    if (grid < 100)
        throw domain_error("verify_tau_integrals: grid must be at least 100");

    const double c = sf.c();
    // Below s ≈ 1e-8 the argument 1-s² rounds to 1 and h evaluates to 0,
    // which would turn the substituted integrand into 2/s; switch to the
    // linear asymptote h(1-s²) ≈ γ·s, with γ measured at s₀ = 1e-6.
    const double gamma = sf.h(1.0 - 1e-12) / 1e-6;

    auto weighted = [&](double s) {   // 2s·(1-τ(y))/(1-y+h(y)), y = 1-s²
        double y = 1.0 - s * s;
        double t = sf.tau(y);
        if (y > 1.0 - 1e-13) return 2.0 * (1.0 - t) / (s + gamma);
        return 2.0 * s * (1.0 - t) / (s * s + sf.h(y));
    };
    auto mass = [&](double s) {       // 2s·τ(1-s²)
        return 2.0 * s * sf.tau(1.0 - s * s);
    };
    auto density = [&](double s) {    // 2s/(1-y+h(y)), y = 1-s²
        double y = 1.0 - s * s;
        if (y > 1.0 - 1e-13) return 2.0 / (s + gamma);
        return 2.0 * s / (s * s + sf.h(y));
    };

    tau_integral_report rep;

    rep.cumulative.identity = "cumulative-tau";
    rep.cumulative.grid = grid;
    rep.cumulative.tol = tol;
    double acc = 0.0, s_prev = 1.0;
    for (int g = 1; g <= grid; ++g) {
        double x = static_cast<double>(g) / grid;
        double s = std::sqrt(1.0 - x);
        acc += adaptive_simpson(weighted, s, s_prev);
        s_prev = s;
        double resid = std::abs(acc - (c - sf.tau(x)));
        rep.cumulative.max_residual = std::max(rep.cumulative.max_residual, resid);
    }
    rep.cumulative.value = rep.cumulative.max_residual;
    rep.cumulative.pass = rep.cumulative.max_residual < tol;

    rep.total_mass.identity = "total-tau-mass";
    rep.total_mass.grid = 1;
    rep.total_mass.tol = tol;
    double total = adaptive_simpson(mass, 0.0, 1.0);
    rep.total_mass.value = total;
    rep.total_mass.max_residual = std::abs(total - (1.0 - c));
    rep.total_mass.pass = rep.total_mass.max_residual < tol;

    rep.unit_bound.identity = "density-below-one";
    rep.unit_bound.grid = 1;
    rep.unit_bound.tol = 1.0;
    double density_total = adaptive_simpson(density, 0.0, 1.0);
    rep.unit_bound.value = density_total;
    rep.unit_bound.max_residual = density_total;
    rep.unit_bound.pass = density_total < 1.0;

    rep.pass = rep.cumulative.pass && rep.total_mass.pass && rep.unit_bound.pass;
    return rep;
}

// Pointwise residual of the defining ODE 1 - f(φ) + f(c-φ) + (1-φ)f'(φ) = 0,
// evaluated with the analytic derivative on a grid that stays 1e-6 away
// from the endpoints.
inline residual_report verify_f_ode(const special_functions& sf,
                                    int grid = 10000, double tol = 1e-8) {
    residual_report rep;
    rep.identity = "f-ode";
    rep.grid = grid;
    rep.tol = tol;
    const double c = sf.c();
    const double lo = 1e-6, hi = c - 1e-6;
    for (int g = 0; g < grid; ++g) {
        double phi = lo + (hi - lo) * g / (grid - 1);
        double r = 1.0 - sf.f(phi) + sf.f(c - phi) + (1.0 - phi) * sf.f_prime(phi);
        rep.max_residual = std::max(rep.max_residual, std::abs(r));
    }
    rep.value = rep.max_residual;
    rep.pass = rep.max_residual < tol;
    return rep;
}

} // namespace fomatch
