// Sweep the two adversarial families and watch the ratios close in on
// their limits: 2-sqrt(2) for water-filling, omega for ranking.
#include <cstdio>

#include <fomatch/fomatch.hpp>

using namespace fomatch;

int main() {
    std::printf("water-filling on its hard family (target %.10f)\n", water_ratio());
    std::printf("   k    m      ratio        gap\n");
    for (int k : {5, 10, 20, 40}) {
        const auto rep = ratio_on_hard_instance(k, k, linear_gain());
        std::printf("%4d %4d   %.8f   %+.2e\n", k, k, rep.ratio, rep.ratio - water_ratio());
    }

    std::printf("\nstationary level profile of the same family\n");
    std::printf("   k      ratio_k      gap         max dev vs tau\n");
    for (int k : {10, 100, 1000}) {
        const auto prof = stationary_profile(k);
        std::printf("%5d   %.8f   %+.2e   %.4f\n", k, prof.ratio_k, prof.ratio_k - water_ratio(),
                    prof.max_dev_vs_tau);
    }

    std::printf("\nranking on its hard family (target omega %.10f)\n", omega_constant());
    std::printf("   k    m   trials   bulk mean    gap        stderr\n");
    for (int k : {5, 10, 20}) {
        const auto rep = hard_instance_ratio(k, 10, 2000, 42);
        std::printf("%4d %4d   %5d   %.6f   %+.2e   %.1e\n", k, 10, 2000, rep.bulk_mean,
                    rep.bulk_mean - omega_constant(), rep.bulk_stderr_);
    }
    return 0;
}
