#pragma once

// Adversarial family for water-filling: m groups of k u-vertices and k
// v-vertices, an upper-triangle gadget inside each group, and h-induced
// edges into the next group sized so that every pour spreads as thin as the
// analysis demands.  Includes the discretized stationary fixed point whose
// value converges to 2-√2, and the staggered-deadline generalization whose
// gradual reveal makes all available neighbors indistinguishable.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "fomatch/constants.hpp"
#include "fomatch/instance.hpp"
#include "fomatch/rng.hpp"
#include "fomatch/special_functions.hpp"
#include "fomatch/waterfill.hpp"

namespace fomatch {

// Id layout of the basic hard instance: group t ∈ [1..m] holds u_{t,1..k}
// then v_{t,1..k} contiguously.
struct wf_hard_layout {
    int k = 0, m = 0;
    vertex_id u(int t, int i) const { return (t - 1) * 2 * k + (i - 1); }
    vertex_id v(int t, int j) const { return (t - 1) * 2 * k + k + (j - 1); }
};

namespace detail {

// cut[i-1] = min(k, ⌊k·h((i-1)/k)⌋): how many next-group u's the i-th
// u-vertex reaches.  h(0) = 1 exactly, so the first row reaches all k.
inline std::vector<int> h_cuts(const special_functions& sf, int k) {
    std::vector<int> cut(k);
    for (int i = 1; i <= k; ++i) {
        double v = static_cast<double>(k) * sf.h((i - 1.0) / k);
        cut[i - 1] = std::min<int>(k, static_cast<int>(std::floor(v)));
    }
    return cut;
}

} // namespace detail

// Upper-triangle edges (u_{t,i}, v_{t,j}) for j ≥ i; h-induced edges
// (u_{t,i}, u_{t+1,j}) for j ≤ cut(i).  Deadlines: all u's in (t,i) order,
// then all v's; arrivals synthesized as late as legal.  Bipartition puts
// odd-t U groups with even-t V groups.
inline instance gen_wf_hard_instance(int k, int m) {
    if (k < 1 || m < 1)
        throw size_overflow("gen_wf_hard_instance: k and m must be positive");
    const std::int64_t n64 = 2LL * k * m;
    if (n64 > 4'000'000)
        throw size_overflow("gen_wf_hard_instance: vertex count " + std::to_string(n64) +
                            " exceeds 4e6");
    special_functions sf;
    std::vector<int> cut = detail::h_cuts(sf, k);
    std::int64_t cut_sum = 0;
    for (int c : cut) cut_sum += c;
    const std::int64_t m_edges = static_cast<std::int64_t>(m) * k * (k + 1) / 2 +
                                 static_cast<std::int64_t>(m - 1) * cut_sum;
    if (m_edges > 30'000'000)
        throw size_overflow("gen_wf_hard_instance: edge count " + std::to_string(m_edges) +
                            " exceeds 3e7");

    wf_hard_layout lay{k, m};
    const vertex_id n = static_cast<vertex_id>(n64);
    std::vector<std::pair<vertex_id, vertex_id>> edges;
    edges.reserve(m_edges);
    for (int t = 1; t <= m; ++t)
        for (int i = 1; i <= k; ++i) {
            for (int j = i; j <= k; ++j)
                edges.emplace_back(lay.u(t, i), lay.v(t, j));
            if (t < m)
                for (int j = 1; j <= cut[i - 1]; ++j)
                    edges.emplace_back(lay.u(t, i), lay.u(t + 1, j));
        }

    std::vector<vertex_id> deadline_order;
    deadline_order.reserve(n);
    for (int t = 1; t <= m; ++t)
        for (int i = 1; i <= k; ++i) deadline_order.push_back(lay.u(t, i));
    for (int t = 1; t <= m; ++t)
        for (int j = 1; j <= k; ++j) deadline_order.push_back(lay.v(t, j));

    std::vector<std::uint8_t> side(n);
    for (int t = 1; t <= m; ++t)
        for (int i = 1; i <= k; ++i) {
            side[lay.u(t, i)] = static_cast<std::uint8_t>(t % 2 == 0);
            side[lay.v(t, i)] = static_cast<std::uint8_t>(t % 2 == 1);
        }
    return from_deadline_order(n, std::move(edges), deadline_order, std::move(side));
}

// Discretized stationary dynamics of the hard family: the level profile of
// a bulk group satisfies p = M(1-p) with M_{i,j} = a_j·[j ≤ J_i], where a_j
// is the reciprocal of the availability count at the j-th pour and J_i the
// h-induced reach.  ratio_k = 1 - ‖p*‖₁/k converges to 2-√2.
struct hardness_profile {
    int k = 0;
    std::vector<double> a;        // a_j = 1/(k-j+1+⌊k·h((j-1)/k)⌋)
    std::vector<int> row_cut;     // J_i: M_{i,j} = a_j for j ≤ J_i, else 0
    std::vector<double> p_star;
    double ratio_k = 0.0;
    double max_row_sum = 0.0;
    int iterations = 0;
    double max_dev_vs_tau = 0.0;  // max_j |p*_j - τ(j/k)|, reported only
};

inline hardness_profile stationary_profile(int k) {
    if (k < 2) throw size_overflow("stationary_profile: k must be at least 2");
    special_functions sf;
    hardness_profile prof;
    prof.k = k;
    prof.a.resize(k);
    prof.row_cut.resize(k);
    std::vector<double> a_prefix(k + 1, 0.0);
    for (int j = 1; j <= k; ++j) {
        double avail = k - j + 1 + std::floor(k * sf.h((j - 1.0) / k));
        prof.a[j - 1] = 1.0 / avail;
        a_prefix[j] = a_prefix[j - 1] + prof.a[j - 1];
    }
    for (int i = 1; i <= k; ++i) {
        long long J = static_cast<long long>(std::floor(k * sf.h_inv(static_cast<double>(i) / k) + 1.0));
        prof.row_cut[i - 1] = static_cast<int>(std::clamp(J, 0LL, static_cast<long long>(k)));
        prof.max_row_sum = std::max(prof.max_row_sum, a_prefix[prof.row_cut[i - 1]]);
    }
    if (prof.max_row_sum >= 1.0)
        throw non_contraction("stationary_profile: row sum " +
                              std::to_string(prof.max_row_sum) + " is not below 1");

    std::vector<double> p(k, 0.0), next(k, 0.0), s(k + 1, 0.0);
    constexpr int max_iters = 200000;
    for (prof.iterations = 1; prof.iterations <= max_iters; ++prof.iterations) {
        for (int j = 1; j <= k; ++j) s[j] = s[j - 1] + prof.a[j - 1] * (1.0 - p[j - 1]);
        double diff = 0.0;
        for (int i = 0; i < k; ++i) {
            next[i] = s[prof.row_cut[i]];
            diff = std::max(diff, std::abs(next[i] - p[i]));
        }
        p.swap(next);
        if (diff < 1e-12) break;
        if (prof.iterations == max_iters)
            throw non_contraction("stationary_profile: no convergence after " +
                                  std::to_string(max_iters) + " iterations");
    }
    prof.p_star = p;
    neumaier_sum mass;
    for (double pj : p) mass.add(pj);
    prof.ratio_k = 1.0 - mass.value() / k;
    for (int j = 1; j <= k; ++j)
        prof.max_dev_vs_tau = std::max(prof.max_dev_vs_tau,
                                       std::abs(p[j - 1] - sf.tau(static_cast<double>(j) / k)));
    return prof;
}

// Full water-filling run on the hard instance, with the saturation
// properties the analysis predicts: every u in groups t < m ends fully
// matched, while no u's passive level reaches 1.
struct hard_run_report {
    int k = 0, m = 0;
    double ratio = 0.0;
    double min_interior_x = 1.0;  // min x over u_{t,i} with t < m
    double max_p = 0.0;           // max passive level over all u_{t,i}
    bool x_saturated = false;     // min_interior_x ≥ 1 - 1e-9
    bool p_below_one = false;     // max_p < 1
};

inline hard_run_report ratio_on_hard_instance(int k, int m, const gain_function& gain) {
    instance inst = gen_wf_hard_instance(k, m);
    fractional_outcome out = run_waterfill(inst, gain);
    wf_hard_layout lay{k, m};
    hard_run_report rep;
    rep.k = k;
    rep.m = m;
    rep.ratio = achieved_ratio(out, inst);
    for (int t = 1; t <= m; ++t)
        for (int i = 1; i <= k; ++i) {
            if (t < m) rep.min_interior_x = std::min(rep.min_interior_x, out.x[lay.u(t, i)]);
            rep.max_p = std::max(rep.max_p, out.p[lay.u(t, i)]);
        }
    if (m == 1) rep.min_interior_x = 1.0;  // no interior groups to check
    rep.x_saturated = rep.min_interior_x >= 1.0 - 1e-9;
    rep.p_below_one = rep.max_p < 1.0;
    return rep;
}

// Uniformly random vertex relabeling.  Marginally, the identities of every
// deadline's available set are uniform, which is the randomized-identity
// reduction the hardness argument needs; the relabeled instance is
// isomorphic to the input.
struct relabeled_instance {
    instance inst;
    std::vector<vertex_id> map;   // map[old_id] = new_id
};

inline relabeled_instance random_relabel(const instance& in, std::uint64_t seed) {
    auto eng = make_engine(seed);
    std::vector<vertex_id> perm(in.n);
    for (vertex_id v = 0; v < in.n; ++v) perm[v] = v;
    for (vertex_id i = in.n - 1; i > 0; --i) {
        vertex_id j = static_cast<vertex_id>(eng() % static_cast<std::uint64_t>(i + 1));
        std::swap(perm[i], perm[j]);
    }
    std::vector<std::pair<vertex_id, vertex_id>> edges;
    edges.reserve(in.edges.size());
    for (auto [u, v] : in.edges) edges.emplace_back(perm[u], perm[v]);
    std::vector<event> timeline;
    timeline.reserve(in.timeline.size());
    for (const event& e : in.timeline) timeline.push_back({e.kind, perm[e.v]});
    std::vector<std::uint8_t> side;
    if (in.bipartite()) {
        side.resize(in.n);
        for (vertex_id v = 0; v < in.n; ++v) side[perm[v]] = in.side[v];
    }
    return {build_instance(in.n, std::move(edges), std::move(timeline), std::move(side)),
            std::move(perm)};
}

// ---------------------------------------------------------------------------
// Staggered-deadline generalization: L simultaneous copies whose h-induced
// edges target a shifted version of the next group, with deadlines
// d(t,i,l) = k^{t-3} + i·k^{t-2} + l (kept integral by scaling with k²).
// The shift forces dummy u-vertices for non-positive copy indices; their
// count is independent of L.

struct generalized_label {
    int t = 0, i = 0;
    long long l = 0;
    bool is_v = false;
    bool dummy = false;
};

struct generalized_hard_instance {
    int k = 0, m = 0;
    long long L = 0;
    instance inst;
    std::vector<generalized_label> labels;    // by vertex id
    std::vector<long long> scaled_deadline;   // k²·d for u-type ids, -1 for v's
    long long dummy_count = 0;
    long long dummy_budget = 0;               // m·k^{m+1}
    std::map<std::array<long long, 3>, vertex_id> u_index, v_index;

    vertex_id u_id(int t, int i, long long l) const {
        auto it = u_index.find({t, i, l});
        return it == u_index.end() ? -1 : it->second;
    }
    vertex_id v_id(int t, int i, long long l) const {
        auto it = v_index.find({t, i, l});
        return it == v_index.end() ? -1 : it->second;
    }
};

inline generalized_hard_instance gen_generalized_hard_instance(int k, int m, long long L) {
    if (k < 2)
        throw size_overflow("gen_generalized_hard_instance: k must be at least 2 "
                            "(the deadline order degenerates at k=1)");
    if (m < 1 || L < 1)
        throw size_overflow("gen_generalized_hard_instance: m and L must be positive");
    std::vector<long long> kp(m + 2, 1);      // kp[t] = k^t
    for (int t = 1; t <= m + 1; ++t) {
        kp[t] = kp[t - 1] * k;
        if (kp[t] > 1'000'000'000LL)
            throw size_overflow("gen_generalized_hard_instance: k^" + std::to_string(t) +
                                " overflows the configured range");
    }
    if (kp[m] > 1'000'000)
        throw size_overflow("gen_generalized_hard_instance: k^m exceeds 1e6");
    if (kp[m] * L > 2'000'000)
        throw size_overflow("gen_generalized_hard_instance: k^m·L exceeds 2e6");

    generalized_hard_instance gen;
    gen.k = k;
    gen.m = m;
    gen.L = L;
    gen.dummy_budget = static_cast<long long>(m) * kp[m + 1];

    // Enumerate vertices: real u's lexicographic, then real v's, then the
    // dummy u's forced by the shift (third index l' ≤ 0).
    vertex_id next_id = 0;
    for (int t = 1; t <= m; ++t)
        for (int i = 1; i <= k; ++i)
            for (long long l = 1; l <= L; ++l)
                gen.u_index[{t, i, l}] = next_id++;
    for (int t = 1; t <= m; ++t)
        for (int i = 1; i <= k; ++i)
            for (long long l = 1; l <= L; ++l)
                gen.v_index[{t, i, l}] = next_id++;
    for (int t = 1; t < m; ++t)
        for (int j = 1; j <= k; ++j) {
            long long shift = kp[t - 1] * (j - 1);
            for (long long l = 1; l <= std::min<long long>(L, shift); ++l)
                gen.u_index[{t + 1, j, l - shift}] = next_id++;
        }
    gen.dummy_count = next_id - 2LL * k * m * L;
    if (next_id > 4'000'000)
        throw size_overflow("gen_generalized_hard_instance: vertex count " +
                            std::to_string(next_id) + " exceeds 4e6");
    const vertex_id n = next_id;

    gen.labels.assign(n, {});
    gen.scaled_deadline.assign(n, -1);
    std::vector<std::uint8_t> side(n);
    for (const auto& [key, id] : gen.u_index) {
        int t = static_cast<int>(key[0]);
        gen.labels[id] = {t, static_cast<int>(key[1]), key[2], false, key[2] <= 0};
        gen.scaled_deadline[id] = kp[t - 1] + key[1] * kp[t] + key[2] * k * k;
        side[id] = static_cast<std::uint8_t>(t % 2 == 0);
    }
    for (const auto& [key, id] : gen.v_index) {
        int t = static_cast<int>(key[0]);
        gen.labels[id] = {t, static_cast<int>(key[1]), key[2], true, false};
        side[id] = static_cast<std::uint8_t>(t % 2 == 1);
    }

    special_functions sf;
    std::vector<int> cut = detail::h_cuts(sf, k);
    std::vector<std::pair<vertex_id, vertex_id>> edges;
    for (int t = 1; t <= m; ++t)
        for (long long l = 1; l <= L; ++l)
            for (int i = 1; i <= k; ++i) {
                vertex_id u = gen.u_id(t, i, l);
                for (int j = i; j <= k; ++j)
                    edges.emplace_back(u, gen.v_id(t, j, l));
                if (t < m)
                    for (int j = 1; j <= cut[i - 1]; ++j)
                        edges.emplace_back(u, gen.u_id(t + 1, j, l - kp[t - 1] * (j - 1)));
            }

    // u deadlines ordered by scaled value (ties broken by id: ties occur
    // exactly inside one shifted group, where the relative order is free),
    // then every v.
    std::vector<vertex_id> u_ids;
    u_ids.reserve(gen.u_index.size());
    for (const auto& [key, id] : gen.u_index) u_ids.push_back(id);
    std::sort(u_ids.begin(), u_ids.end(), [&](vertex_id a, vertex_id b) {
        if (gen.scaled_deadline[a] != gen.scaled_deadline[b])
            return gen.scaled_deadline[a] < gen.scaled_deadline[b];
        return a < b;
    });
    std::vector<vertex_id> deadline_order(u_ids);
    for (const auto& [key, id] : gen.v_index) deadline_order.push_back(id);

    gen.inst = from_deadline_order(n, std::move(edges), deadline_order, std::move(side));
    return gen;
}

struct check_report {
    bool pass = true;
    long long checked = 0;
    std::string message;
};

// For every real u, at its deadline: (a) its same-group successors have not
// arrived yet, (b) every available neighbor has arrived, and (c) all
// available neighbors have identical sets of already-expired neighbors —
// the strongest symmetry an algorithm could exploit, since levels and
// revealed history are functions of the expired prefix.
inline check_report check_generalized_indistinguishability(const generalized_hard_instance& gen) {
    check_report rep;
    const instance& inst = gen.inst;
    for (int t = 1; t <= gen.m && rep.pass; ++t)
        for (long long l = 1; l <= gen.L && rep.pass; ++l)
            for (int i = 1; i <= gen.k && rep.pass; ++i) {
                vertex_id u = gen.u_id(t, i, l);
                std::int32_t step = inst.deadline_step[u];
                for (int j = i + 1; j <= gen.k; ++j) {
                    vertex_id succ = gen.u_id(t, j, l);
                    if (inst.arrival_step[succ] < step) {
                        rep.pass = false;
                        rep.message = "successor arrived before deadline of u(" +
                                      std::to_string(t) + "," + std::to_string(i) + "," +
                                      std::to_string(l) + ")";
                    }
                }
                std::vector<vertex_id> avail = available_neighbors(inst, u, step);
                std::vector<vertex_id> expired_ref;
                bool first = true;
                for (vertex_id w : avail) {
                    if (inst.arrival_step[w] > step) {
                        rep.pass = false;
                        rep.message = "available neighbor not yet arrived";
                        break;
                    }
                    std::vector<vertex_id> expired;
                    for (vertex_id x : inst.neighbors(w))
                        if (inst.deadline_step[x] < step) expired.push_back(x);
                    std::sort(expired.begin(), expired.end());
                    if (first) {
                        expired_ref = std::move(expired);
                        first = false;
                    } else if (expired != expired_ref) {
                        rep.pass = false;
                        rep.message = "available neighbors of u(" + std::to_string(t) + "," +
                                      std::to_string(i) + "," + std::to_string(l) +
                                      ") expose different expired neighborhoods";
                        break;
                    }
                }
                ++rep.checked;
            }
    return rep;
}

// Deadline-order facts of the generalized family: every member of a shifted
// group shares one scaled deadline value k^t + k^{t+1} + l·k², and that
// value lies strictly after every deadline in the group it is h-connected
// from.
inline check_report check_generalized_deadline_order(const generalized_hard_instance& gen) {
    check_report rep;
    std::vector<long long> kp(gen.m + 2, 1);
    for (int t = 1; t <= gen.m + 1; ++t) kp[t] = kp[t - 1] * gen.k;
    for (int t = 1; t < gen.m && rep.pass; ++t)
        for (long long l = 1; l <= gen.L && rep.pass; ++l) {
            long long expect = kp[t] + kp[t + 1] + l * gen.k * gen.k;
            std::int32_t min_step = std::numeric_limits<std::int32_t>::max();
            for (int j = 1; j <= gen.k; ++j) {
                vertex_id w = gen.u_id(t + 1, j, l - kp[t - 1] * (j - 1));
                if (w < 0) {
                    rep.pass = false;
                    rep.message = "missing shifted-group member";
                    break;
                }
                if (gen.scaled_deadline[w] != expect) {
                    rep.pass = false;
                    rep.message = "shifted-group member deviates from the shared deadline value";
                    break;
                }
                min_step = std::min(min_step, gen.inst.deadline_step[w]);
            }
            for (int i = 1; i <= gen.k && rep.pass; ++i) {
                vertex_id u = gen.u_id(t, i, l);
                if (gen.inst.deadline_step[u] >= min_step) {
                    rep.pass = false;
                    rep.message = "source-group deadline does not precede the shifted group";
                }
            }
            ++rep.checked;
        }
    return rep;
}

} // namespace fomatch
