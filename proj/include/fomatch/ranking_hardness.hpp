#pragma once

// Adversarial family for the rank-order matching engine: m groups of 2k
// vertices, where group t holds u_{t,1..k} and v_{t,1..k}, each v_{t,i} has
// u_{t,i} as its ONLY neighbor, and consecutive u-layers U_t, U_{t+1} are
// joined completely.  All u deadlines come first (lexicographic in (t,i)),
// then all v deadlines, so every u can always fall back on its private v
// and the optimum is the km intra-group pairs.  As k and m grow the matched
// fraction approaches the omega constant.

#include <cstdint>
#include <string>
#include <vector>

#include "fomatch/constants.hpp"
#include "fomatch/errors.hpp"
#include "fomatch/instance.hpp"
#include "fomatch/ranking.hpp"
#include "fomatch/rng.hpp"

namespace fomatch {

// Ids: group t (1-based) occupies [(t-1)*2k, t*2k); u_{t,i} first, then v_{t,i}.
struct ranking_hard_layout {
    vertex_id k = 0, m = 0;
    vertex_id u(vertex_id t, vertex_id i) const { return (t - 1) * 2 * k + (i - 1); }
    vertex_id v(vertex_id t, vertex_id i) const { return (t - 1) * 2 * k + k + (i - 1); }
};

inline instance gen_ranking_hard_instance(vertex_id k, vertex_id m) {
    if (k < 1 || m < 1)
        throw domain_error("gen_ranking_hard_instance: k and m must be at least 1");
    const std::int64_t vertices = 2LL * k * m;
    const std::int64_t edge_count = 1LL * k * m + 1LL * (m - 1) * k * k;
    if (vertices > 4'000'000 || edge_count > 30'000'000)
        throw size_overflow("gen_ranking_hard_instance: k=" + std::to_string(k) +
                            ", m=" + std::to_string(m) + " needs " + std::to_string(vertices) +
                            " vertices and " + std::to_string(edge_count) + " edges");
    const ranking_hard_layout lay{k, m};

    std::vector<std::pair<vertex_id, vertex_id>> edges;
    edges.reserve(static_cast<std::size_t>(edge_count));
    for (vertex_id t = 1; t <= m; ++t)
        for (vertex_id i = 1; i <= k; ++i) {
            edges.emplace_back(lay.u(t, i), lay.v(t, i));
            if (t < m)
                for (vertex_id j = 1; j <= k; ++j) edges.emplace_back(lay.u(t, i), lay.u(t + 1, j));
        }

    std::vector<vertex_id> order;
    order.reserve(static_cast<std::size_t>(vertices));
    for (vertex_id t = 1; t <= m; ++t)
        for (vertex_id i = 1; i <= k; ++i) order.push_back(lay.u(t, i));
    for (vertex_id t = 1; t <= m; ++t)
        for (vertex_id i = 1; i <= k; ++i) order.push_back(lay.v(t, i));

    // Layers alternate sides; each v sits opposite its only neighbor.
    std::vector<std::uint8_t> side(static_cast<std::size_t>(vertices));
    for (vertex_id t = 1; t <= m; ++t)
        for (vertex_id i = 1; i <= k; ++i) {
            side[static_cast<std::size_t>(lay.u(t, i))] = static_cast<std::uint8_t>(t % 2);
            side[static_cast<std::size_t>(lay.v(t, i))] = static_cast<std::uint8_t>((t + 1) % 2);
        }
    return from_deadline_order(static_cast<vertex_id>(vertices), std::move(edges), order,
                               std::move(side));
}

struct hard_ratio_report {
    vertex_id k = 0, m = 0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    double mean = 0.0, stderr_ = 0.0;            // |matching| / km over the whole instance
    double bulk_mean = 0.0, bulk_stderr_ = 0.0;  // matched fraction inside the bulk groups
    vertex_id bulk_first = 0, bulk_last = 0;     // 0-based group range [first, last)
    double avg_unmatched_u = 0.0;                // per-trial averages, whole instance
    double avg_unmatched_v = 0.0;
    std::vector<trial_row> rows;
};

// Monte Carlo matched fraction on the hard family.  Uses the same per-trial
// seed derivation as estimate_ratio, so `mean`, `stderr_`, and `rows` agree
// with estimate_ratio(gen_ranking_hard_instance(k,m), trials, seed) exactly;
// additionally measures the bulk groups [m/4, 3m/4) away from both boundary
// layers (matched vertices there, over 2k per group), and the composition of
// the unmatched set.  u-vertices can always fall back on their private v, so
// unmatched vertices are expected to be v's only.
inline hard_ratio_report hard_instance_ratio(vertex_id k, vertex_id m, std::int64_t trials,
                                             std::uint64_t seed,
                                             const ranking_gain& gain = ranking_gain::standard()) {
    if (trials <= 0) throw domain_error("hard_instance_ratio: trials must be positive");
    const instance inst = gen_ranking_hard_instance(k, m);
    const std::int64_t opt_pairs = 1LL * k * m;

    hard_ratio_report rep;
    rep.k = k;
    rep.m = m;
    rep.trials = trials;
    rep.seed = seed;
    rep.bulk_first = m / 4;
    rep.bulk_last = 3 * m / 4;
    if (rep.bulk_last <= rep.bulk_first) {  // tiny m: no interior, use everything
        rep.bulk_first = 0;
        rep.bulk_last = m;
    }
    const std::int64_t bulk_groups = rep.bulk_last - rep.bulk_first;
    const vertex_id lo = rep.bulk_first * 2 * k;  // first vertex id in the bulk
    const vertex_id hi = rep.bulk_last * 2 * k;   // one past the last

    rep.rows.reserve(static_cast<std::size_t>(trials));
    neumaier_sum sum, sumsq, bsum, bsumsq, uu, uv;
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(t));
        std::mt19937_64 eng = make_engine(ts);
        const auto ranks = draw_distinct_ranks(static_cast<std::size_t>(inst.n), eng);
        const auto out = run_ranking(inst, ranks, gain);

        const auto matched = out.matched_pairs();
        const double r = static_cast<double>(matched) / static_cast<double>(opt_pairs);
        rep.rows.push_back({t, ts, matched, opt_pairs, r});
        sum.add(r);
        sumsq.add(r * r);

        std::int64_t bulk_matched = 0;
        for (vertex_id w = lo; w < hi; ++w)
            if (out.role[w] != match_role::unmatched) ++bulk_matched;
        const double br = static_cast<double>(bulk_matched) /
                          static_cast<double>(2LL * k * bulk_groups);
        bsum.add(br);
        bsumsq.add(br * br);

        std::int64_t un_u = 0, un_v = 0;
        for (vertex_id w = 0; w < inst.n; ++w)
            if (out.role[w] == match_role::unmatched) ((w % (2 * k)) < k ? un_u : un_v) += 1;
        uu.add(static_cast<double>(un_u));
        uv.add(static_cast<double>(un_v));
    }
    const double n = static_cast<double>(trials);
    rep.mean = sum.value() / n;
    rep.bulk_mean = bsum.value() / n;
    rep.avg_unmatched_u = uu.value() / n;
    rep.avg_unmatched_v = uv.value() / n;
    if (trials > 1) {
        const double var = std::max(0.0, (sumsq.value() - n * rep.mean * rep.mean) / (n - 1.0));
        rep.stderr_ = std::sqrt(var / n);
        const double bvar =
            std::max(0.0, (bsumsq.value() - n * rep.bulk_mean * rep.bulk_mean) / (n - 1.0));
        rep.bulk_stderr_ = std::sqrt(bvar / n);
    }
    return rep;
}

}  // namespace fomatch
