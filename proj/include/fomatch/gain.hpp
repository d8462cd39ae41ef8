#pragma once

// Gain-sharing rules for the fractional (water-filling) engine.  A gain
// function carries its exact antiderivative so dual increments integrate in
// closed form instead of by quadrature.

#include <cmath>
#include <functional>
#include <string>

namespace fomatch {

struct gain_function {
    std::string name;
    std::function<double(double)> g; // non-decreasing [0,1] -> [0,1]
    std::function<double(double)> G; // antiderivative of g with G(0) = 0
};

// g(x) = (sqrt2/2) x + 1 - sqrt2/2, the gain that certifies the 2 - sqrt(2)
// guarantee of water-filling.
inline gain_function linear_gain() {
    const double s = std::sqrt(2.0);
    return gain_function{
        "linear",
        [s](double x) { return 0.5 * s * x + 1.0 - 0.5 * s; },
        [s](double x) { return 0.25 * s * x * x + (1.0 - 0.5 * s) * x; },
    };
}

} // namespace fomatch
