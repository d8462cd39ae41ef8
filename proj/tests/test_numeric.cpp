#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include <fomatch/constants.hpp>
#include <fomatch/numeric.hpp>
#include <fomatch/rng.hpp>

using namespace fomatch;

TEST_CASE("bisect finds square roots") {
    double r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0);
    REQUIRE(std::abs(r - std::sqrt(2.0)) < 1e-12);
    // increasing and decreasing brackets both work
    double s = bisect([](double x) { return 2.0 - x * x; }, 0.0, 2.0);
    REQUIRE(std::abs(s - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("newton solves x*exp(x)=1") {
    double r = newton([](double x) { return x * std::exp(x) - 1.0; },
                      [](double x) { return std::exp(x) * (1.0 + x); }, 0.5);
    REQUIRE(std::abs(r - 0.56714329040978384) < 1e-15);  // Lambert W(1)
}

TEST_CASE("adaptive simpson integrates smooth functions") {
    double q = adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0);
    REQUIRE(std::abs(q - 1.0 / 3.0) < 1e-12);
    double s = adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                                std::acos(-1.0));
    REQUIRE(std::abs(s - 2.0) < 1e-10);
    REQUIRE(adaptive_simpson([](double x) { return x; }, 0.3, 0.3) == 0.0);
}

TEST_CASE("adaptive simpson rejects non-finite integrands") {
    REQUIRE_THROWS_AS(adaptive_simpson([](double x) { return 1.0 / x; }, 0.0, 1.0),
                      quadrature_failure);
}

TEST_CASE("neumaier summation keeps cancelled mass") {
    neumaier_sum acc;
    acc.add(1e16);
    acc.add(1.0);
    acc.add(-1e16);
    REQUIRE(acc.value() == 1.0);

    neumaier_sum tenths;
    for (int i = 0; i < 10; ++i) tenths.add(0.1);
    REQUIRE(std::abs(tenths.value() - 1.0) <= 1e-15);
}

TEST_CASE("constants are the advertised roots") {
    REQUIRE(water_ratio() == 2.0 - std::sqrt(2.0));
    const double om = omega_constant();
    REQUIRE(std::abs(om * std::exp(om) - 1.0) <= 1e-15);
    REQUIRE(std::abs(om - 0.56714329040978384) <= 1e-15);            // [lambertw(1)]
    REQUIRE(std::abs(omega_fixed_point() - om) <= 1e-13);            // x = exp(-x)
    const double c = rank_gain_constant();
    REQUIRE(std::abs(c - 1.0 / (1.0 + std::exp(om))) <= 1e-15);
    REQUIRE(std::abs(c - 0.36189625663488922) <= 1e-15);
    // The two Omega characterizations agree through the gain constant:
    // c - c*ln(c/(1-c)) = Omega.
    REQUIRE(std::abs(c - c * std::log(c / (1.0 - c)) - om) <= 1e-12);
}

TEST_CASE("seed derivation is deterministic and spread out") {
    REQUIRE(derive_seed(42, 0) == derive_seed(42, 0));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(42, i));
    REQUIRE(seen.size() == 1000);
    REQUIRE(derive_seed(42, 7) != derive_seed(43, 7));
}

TEST_CASE("uniform01 stays in the half-open unit interval") {
    auto eng = make_engine(7);
    for (int i = 0; i < 100000; ++i) {
        double u = uniform01(eng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    // determinism: same seed, same stream
    auto a = make_engine(99), b = make_engine(99);
    for (int i = 0; i < 100; ++i) REQUIRE(uniform01(a) == uniform01(b));
}

TEST_CASE("draw_distinct_ranks yields distinct interior values") {
    auto eng = make_engine(3);
    auto ranks = draw_distinct_ranks(2000, eng);
    REQUIRE(ranks.size() == 2000);
    std::set<double> uniq(ranks.begin(), ranks.end());
    REQUIRE(uniq.size() == 2000);
    for (double r : ranks) {
        REQUIRE(r >= 0.0);
        REQUIRE(r < 1.0);
    }
}
