#pragma once

// The two competitive ratios and the constants behind the dual gains.
// Everything is computed from first principles (sqrt, exp, log, Newton);
// no decimal literals of derived quantities appear anywhere.

#include <cmath>
#include "fomatch/numeric.hpp"

namespace fomatch {

// Fractional guarantee of water-filling with the linear gain: 2 - sqrt(2).
inline double water_ratio() { return 2.0 - std::sqrt(2.0); }

// Unique root of x * e^x = 1; the integral guarantee of rank-based matching.
inline double omega_constant() {
    static const double omega = newton(
        [](double x) { return x * std::exp(x) - 1.0; },
        [](double x) { return std::exp(x) * (1.0 + x); },
        0.5, 1e-16);
    return omega;
}

// Same number reached through its fixed-point characterization x = e^{-x};
// the asymptotic matched fraction in the stochastic hard-instance dynamics.
inline double omega_fixed_point() {
    static const double omega = newton(
        [](double x) { return x - std::exp(-x); },
        [](double x) { return 1.0 + std::exp(-x); },
        0.5, 1e-16);
    return omega;
}

// Scale constant of the rank gain: 1 / (1 + e^Omega) = Omega / (1 + Omega).
inline double rank_gain_constant() {
    return 1.0 / (1.0 + std::exp(omega_constant()));
}

} // namespace fomatch
