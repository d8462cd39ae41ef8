#pragma once

// Quantum-by-quantum water pouring used as a test oracle for the closed-form
// pour: repeatedly drop `dx` of mass on the currently lowest level (clamping
// at 1) until the capacity is spent or everything is full.  O(capacity/dx · d)
// and shares nothing with the sort/prefix-sum implementation.

#include <algorithm>
#include <vector>

namespace fomatch_testing {

struct discretized_pour_result {
    std::vector<double> levels;
    double poured = 0.0;
};

inline discretized_pour_result discretized_pour(std::vector<double> levels, double capacity,
                                                double dx) {
    double remaining = capacity;
    double poured = 0.0;
    while (remaining > 0.0) {
        std::size_t best = levels.size();
        for (std::size_t i = 0; i < levels.size(); ++i)
            if (levels[i] < 1.0 && (best == levels.size() || levels[i] < levels[best])) best = i;
        if (best == levels.size()) break;  // everything full
        const double step = std::min({dx, remaining, 1.0 - levels[best]});
        levels[best] += step;
        remaining -= step;
        poured += step;
    }
    return {std::move(levels), poured};
}

}  // namespace fomatch_testing
