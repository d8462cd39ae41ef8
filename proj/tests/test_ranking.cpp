#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <fomatch/constants.hpp>
#include <fomatch/instance.hpp>
#include <fomatch/numeric.hpp>
#include <fomatch/random_instances.hpp>
#include <fomatch/ranking.hpp>
#include <fomatch/rng.hpp>

#include "naive_ranking.hpp"

using namespace fomatch;

namespace {

instance sequential(vertex_id n, const std::vector<std::pair<vertex_id, vertex_id>>& edges,
                    std::vector<std::uint8_t> side = {}) {
    std::vector<vertex_id> order(n);
    for (vertex_id v = 0; v < n; ++v) order[v] = v;
    return from_deadline_order(n, edges, order, std::move(side));
}

// u=0 expires first and chooses between v=1 and w=2 by rank.
instance fork_gadget() { return sequential(3, {{0, 1}, {0, 2}}); }

}  // namespace

TEST_CASE("rank gain constants are frozen") {
    const auto g = ranking_gain::standard();
    REQUIRE(std::abs(g.c - 0.36189625663488922) <= 1e-15);
    REQUIRE(std::abs(g.plateau_start - 0.4328567095902161) <= 1e-15);
    REQUIRE(std::abs(g.plateau - 0.63810374336511078) <= 1e-15);
    REQUIRE(g.plateau == 1.0 - g.c);
    // total dual mass of one matched pair integrates to Omega exactly
    REQUIRE(std::abs(g.G(1.0) - omega_constant()) <= 1e-15);
}

TEST_CASE("rank gain is continuous with the right derivatives") {
    const auto g = ranking_gain::standard();
    const double b = g.plateau_start;
    REQUIRE(std::abs(g.g(b - 1e-12) - g.g(b)) <= 1e-11);     // g continuous at the knee
    REQUIRE(std::abs(g.G(b - 1e-9) - g.G(b + 1e-9)) <= 1e-8);
    REQUIRE(std::abs(g.H(b - 1e-9) - g.H(b + 1e-9)) <= 1e-8);
    REQUIRE(g.g(1.0) == 1.0);          // convention above the top rank
    REQUIRE(g.g(0.99) == g.plateau);   // plateau holds below 1

    // G' = g and H' = y*g(y) by quadrature cross-check
    for (double y : {0.1, 0.3, 0.55, 0.8}) {
        double G = adaptive_simpson([&](double s) { return g.g(s); }, 0.0, y, 1e-12);
        REQUIRE(std::abs(G - g.G(y)) <= 1e-10);
        double H = adaptive_simpson([&](double s) { return s * g.g(s); }, 0.0, y, 1e-12);
        REQUIRE(std::abs(H - g.H(y)) <= 1e-10);
    }
}

TEST_CASE("single edge: active takes the complement of the passive gain") {
    instance inst = sequential(2, {{0, 1}}, {0, 1});
    const auto g = ranking_gain::standard();
    std::vector<double> ranks = {0.9, 0.3};
    auto out = run_ranking(inst, ranks);
    REQUIRE(out.matched_pairs() == 1);
    REQUIRE(out.role[0] == match_role::active);
    REQUIRE(out.role[1] == match_role::passive);
    REQUIRE(out.partner[0] == 1);
    REQUIRE(out.partner[1] == 0);
    REQUIRE(out.partner_rank[0] == 0.3);
    REQUIRE(out.alpha[0] == 1.0 - g.g(0.3));
    REQUIRE(out.alpha[1] == g.g(0.3));
    REQUIRE(out.matches == std::vector<std::pair<vertex_id, vertex_id>>{{0, 1}});
}

TEST_CASE("active vertex picks the lowest rank, ties to the smaller id") {
    instance star = sequential(4, {{0, 1}, {0, 2}, {0, 3}});
    auto out = run_ranking(star, {0.5, 0.8, 0.2, 0.6});
    REQUIRE(out.partner[0] == 2);
    auto tie = run_ranking(star, {0.5, 0.4, 0.4, 0.4});
    REQUIRE(tie.partner[0] == 1);
}

TEST_CASE("matching depends only on the rank order") {
    for (int i = 0; i < 60; ++i) {
        auto eng = make_engine(derive_seed(61, i));
        instance inst = gen_random_instance(9, 0.45, (i % 2) == 0, derive_seed(62, i));
        auto ranks = draw_distinct_ranks(9, eng);
        // order-preserving distortion: y -> y^3 * 0.7 + y * 0.3 is monotone
        auto warped = ranks;
        for (auto& y : warped) y = 0.7 * y * y * y + 0.3 * y;
        auto a = run_ranking(inst, ranks);
        auto b = run_ranking(inst, warped);
        REQUIRE(a.matches == b.matches);
    }
}

TEST_CASE("excluded vertices neither match nor get matched") {
    instance path = sequential(3, {{0, 1}, {1, 2}});
    std::vector<std::uint8_t> skip = {0, 1, 0};  // remove the middle vertex
    auto out = run_ranking(path, {0.1, 0.2, 0.3}, ranking_gain::standard(), skip);
    REQUIRE(out.matched_pairs() == 0);
    REQUIRE(out.role[1] == match_role::unmatched);

    skip = {0, 0, 1};
    out = run_ranking(path, {0.1, 0.2, 0.3}, ranking_gain::standard(), skip);
    REQUIRE(out.matches == std::vector<std::pair<vertex_id, vertex_id>>{{0, 1}});
}

TEST_CASE("engine agrees with a naive edge-scan oracle") {
    for (int i = 0; i < 500; ++i) {
        auto eng = make_engine(derive_seed(71, i));
        const int n = 2 + static_cast<int>(eng() % 9);
        const double p = 0.2 + 0.6 * uniform01(eng);
        instance inst = gen_random_instance(n, p, (i % 2) == 0, derive_seed(72, i));
        auto ranks = draw_distinct_ranks(static_cast<std::size_t>(n), eng);
        auto fast = run_ranking(inst, ranks);
        auto naive = fomatch_testing::naive_ranking_matches(inst, ranks);
        REQUIRE(fast.matches == naive);
    }
}

TEST_CASE("marginal rank on hand instances") {
    instance edge = sequential(2, {{0, 1}});
    // the later vertex is always taken; the earlier one never passively
    REQUIRE(marginal_rank(edge, 1, {0.5, 0.5}) == 1.0);
    REQUIRE(marginal_rank(edge, 0, {0.5, 0.5}) == 0.0);

    instance fork = fork_gadget();
    // v=1 is passively matched exactly while it outranks w=2
    REQUIRE(marginal_rank(fork, 1, {0.5, 0.5, 0.37}) == 0.37);
    REQUIRE(marginal_rank(fork, 2, {0.5, 0.41, 0.5}) == 0.41);
}

TEST_CASE("fork gadget thresholds and exhaustive gain are exact") {
    instance fork = fork_gadget();
    const auto g = ranking_gain::standard();
    std::vector<double> ranks = {0.5, 0.5, 0.37};  // only ranks[2] matters

    auto rep = thresholds(fork, 0, 1, ranks);
    REQUIRE(rep.tau == 0.0);
    REQUIRE(rep.gamma == 0.0);
    REQUIRE(rep.constancy_pass);
    REQUIRE(rep.gamma_bound_pass);
    REQUIRE_FALSE(rep.theta_samples.empty());
    for (const auto& s : rep.theta_samples) REQUIRE(s.theta == 0.37);
    REQUIRE(rep.theta == 0.37);

    // E[alpha_u + alpha_v] = theta + (1-theta)(1-g(theta)), independent of y_u
    const double theta = 0.37;
    const double expect = theta + (1.0 - theta) * (1.0 - g.g(theta));
    auto ex = expected_edge_gain(fork, 0, 1, ranks, gain_mode::exhaustive);
    REQUIRE(std::abs(ex.value - expect) <= 1e-15);
    REQUIRE(ex.cells > 0);

    auto mc = expected_edge_gain(fork, 0, 1, ranks, gain_mode::montecarlo,
                                 ranking_gain::standard(), 20000, 5);
    REQUIRE(mc.trials == 20000);
    REQUIRE(mc.stderr_ > 0.0);
    REQUIRE(std::abs(mc.value - expect) <= 4.0 * mc.stderr_);
}

TEST_CASE("threshold reports demand a properly ordered edge") {
    instance edge = sequential(2, {{0, 1}});
    REQUIRE_THROWS_AS(thresholds(edge, 1, 0, {0.5, 0.5}), domain_error);
    instance two = sequential(3, {{0, 1}});
    REQUIRE_THROWS_AS(thresholds(two, 0, 2, {0.5, 0.5, 0.5}), domain_error);
}

TEST_CASE("split-gain identity and floors hold on random instances") {
    int nontrivial = 0;
    for (int i = 0; i < 40; ++i) {
        auto eng = make_engine(derive_seed(81, i));
        const int n = 3 + static_cast<int>(eng() % 6);
        instance inst = gen_random_instance(n, 0.5, true, derive_seed(82, i));
        auto ranks = draw_distinct_ranks(static_cast<std::size_t>(n), eng);
        for (auto [a, b] : inst.edges) {
            vertex_id u = a, v = b;
            if (inst.deadline_step[u] > inst.deadline_step[v]) std::swap(u, v);

            auto th = thresholds(inst, u, v, ranks);
            REQUIRE(th.gamma_bound_pass);  // theta >= gamma pointwise
            REQUIRE(th.constancy_pass);

            auto id = check_threshold_gain_identity(inst, u, v, ranks);
            REQUIRE(id.pass);
            REQUIRE(id.residual <= 1e-9);
            if (id.lhs > 1e-12) ++nontrivial;

            auto tail = check_tail_gain_bound(inst, u, v, ranks);
            REQUIRE(tail.pass);

            auto mm = check_minmax_gain_bound(inst, u, v, ranks);
            REQUIRE(mm.pass);
        }
    }
    REQUIRE(nontrivial > 20);  // the sweep exercises non-degenerate splits
}

TEST_CASE("tail bound is tight on the fork gadget") {
    instance fork = fork_gadget();
    auto rep = check_tail_gain_bound(fork, 0, 1, {0.5, 0.5, 0.37});
    REQUIRE(rep.pass);
    REQUIRE_FALSE(rep.samples.empty());
    REQUIRE(std::abs(rep.min_margin) <= 1e-12);  // equality case of the bound
}

TEST_CASE("single-threshold floor equals a dense grid scan") {
    const auto g = ranking_gain::standard();
    for (double gu : {0.3, 0.45, 0.6374, 0.64, 0.9, 1.0}) {
        double grid_min = 1e300;
        for (int i = 0; i <= 4000; ++i) {
            double th = i / 4000.0;
            grid_min = std::min(grid_min, g.G(th) + std::min(1.0 - g.g(th), gu));
        }
        REQUIRE(single_threshold_floor(g, gu) <= grid_min + 1e-12);
        REQUIRE(single_threshold_floor(g, gu) >= grid_min - 1e-4);
    }
}

TEST_CASE("functional minimum reproduces Omega and detects mutations") {
    auto rep = gain_bound_functional_min(ranking_gain::standard(), 160);
    REQUIRE(rep.min_value == 0.56714329040978373);  // frozen grid-160 scan
    REQUIRE(std::abs(rep.min_value - omega_constant()) <= 1e-9);
    REQUIRE(rep.grid == 160);

    // a coarser grid still lands inside the acceptance band
    auto coarse = gain_bound_functional_min(ranking_gain::standard(), 80);
    REQUIRE(coarse.min_value >= omega_constant() - 1e-9);
    REQUIRE(coarse.min_value <= omega_constant() + 5e-3);

    // perturbing the plateau breaks optimality detectably
    auto bad = ranking_gain::standard();
    bad.plateau = 0.6;
    auto mut = gain_bound_functional_min(bad, 160);
    REQUIRE(mut.min_value == 0.54553300802076499);  // frozen
    REQUIRE(mut.min_value < omega_constant() - 0.02);

    REQUIRE_THROWS_AS(gain_bound_functional_min(ranking_gain::standard(), 1), domain_error);
}

TEST_CASE("rank monotonicity: removing a vertex never helps its neighbors") {
    for (int i = 0; i < 100; ++i) {
        auto eng = make_engine(derive_seed(91, i));
        const int n = 3 + static_cast<int>(eng() % 6);
        instance inst = gen_random_instance(n, 0.5, true, derive_seed(92, i));
        auto ranks = draw_distinct_ranks(static_cast<std::size_t>(n), eng);
        for (vertex_id u = 0; u < inst.n; ++u) {
            auto rep = check_rank_monotonicity(inst, ranks, u);
            REQUIRE(rep.pass);
            REQUIRE(rep.improved.empty());
        }
    }
    instance tri = sequential(3, {{0, 1}, {1, 2}, {0, 2}});
    REQUIRE_THROWS_AS(check_rank_monotonicity(tri, {0.1, 0.2, 0.3}, 0), not_bipartite);
}

TEST_CASE("estimate_ratio on a forced and an empty instance") {
    instance edge = sequential(2, {{0, 1}}, {0, 1});
    auto est = estimate_ratio(edge, 50, 7);
    REQUIRE(est.mean == 1.0);
    REQUIRE(est.stderr_ == 0.0);
    REQUIRE(est.opt == 1);
    REQUIRE(est.rows.size() == 50);
    for (const auto& r : est.rows) {
        REQUIRE(r.matched == 1);
        REQUIRE(r.ratio == 1.0);
    }

    instance lonely = sequential(2, {}, {0, 1});
    REQUIRE_THROWS_AS(estimate_ratio(lonely, 10, 7), zero_opt);
    instance tri = sequential(3, {{0, 1}, {1, 2}, {0, 2}});
    REQUIRE_THROWS_AS(estimate_ratio(tri, 10, 7), not_bipartite);
}

TEST_CASE("exhaustive integration refuses oversized breakpoint grids") {
    std::vector<std::pair<vertex_id, vertex_id>> path;
    for (vertex_id v = 0; v + 1 < 70; ++v) path.push_back({v, v + 1});
    instance inst = sequential(70, path);
    auto eng = make_engine(13);
    auto ranks = draw_distinct_ranks(70, eng);
    REQUIRE_THROWS_AS(expected_edge_gain(inst, 0, 1, ranks, gain_mode::exhaustive),
                      too_large_for_exhaustive);
}

TEST_CASE("dual mass accounting on random runs") {
    // every matched pair contributes exactly one unit of alpha in total
    for (int i = 0; i < 60; ++i) {
        auto eng = make_engine(derive_seed(101, i));
        instance inst = gen_random_instance(10, 0.4, (i % 2) == 0, derive_seed(102, i));
        auto ranks = draw_distinct_ranks(10, eng);
        auto out = run_ranking(inst, ranks);
        neumaier_sum alpha_total;
        for (double a : out.alpha) alpha_total.add(a);
        REQUIRE(std::abs(alpha_total.value() - static_cast<double>(out.matched_pairs())) <=
                1e-12);
        for (auto [act, pas] : out.matches) {
            REQUIRE(out.role[act] == match_role::active);
            REQUIRE(out.role[pas] == match_role::passive);
            REQUIRE(out.partner[act] == pas);
            REQUIRE(out.partner[pas] == act);
            REQUIRE(out.alpha[act] + out.alpha[pas] == 1.0);
            // deadlines: the active endpoint expires first
            REQUIRE(inst.deadline_step[act] < inst.deadline_step[pas]);
        }
    }
}
