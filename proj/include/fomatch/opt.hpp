#pragma once

// Offline optimum oracles.
//
// Bipartite integral OPT: Hopcroft–Karp over the instance's bipartition.
// General-graph fractional OPT: exploits half-integrality — it equals half
// the maximum matching of the bipartite double cover, so no LP solver is
// needed and the witness is exact in halves.

#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "fomatch/instance.hpp"

namespace fomatch {

struct opt_value {
    long long half_units = 0;               // optimum in half-units (exact)
    std::vector<std::int8_t> edge_halves;   // witness: 0, 1, or 2 halves per edge
    double value() const { return static_cast<double>(half_units) / 2.0; }
};

namespace detail {

// Hopcroft–Karp on an implicit bipartite graph: `lefts` lists left-side
// vertices; neighbors(u) yields right-side vertices.  pair arrays are over
// the full id space.  DFS depth is bounded by the BFS layering, which never
// exceeds the phase count, so recursion is safe.
template <typename NbrFn>
struct hopcroft_karp {
    vertex_id n;
    const std::vector<vertex_id>& lefts;
    NbrFn neighbors;
    std::vector<vertex_id> pair_left, pair_right;
    std::vector<std::int32_t> dist;
    std::vector<std::int64_t> scan;
    static constexpr std::int32_t INF = std::numeric_limits<std::int32_t>::max();

    hopcroft_karp(vertex_id n_, const std::vector<vertex_id>& lefts_, NbrFn nbrs)
        : n(n_), lefts(lefts_), neighbors(nbrs),
          pair_left(n_, -1), pair_right(n_, -1), dist(n_, 0), scan(n_, 0) {}

    bool bfs() {
        std::queue<vertex_id> q;
        bool reachable_free = false;
        for (vertex_id u : lefts) {
            if (pair_left[u] == -1) { dist[u] = 0; q.push(u); }
            else dist[u] = INF;
        }
        while (!q.empty()) {
            vertex_id u = q.front(); q.pop();
            for (vertex_id w : neighbors(u)) {
                vertex_id u2 = pair_right[w];
                if (u2 == -1) { reachable_free = true; continue; }
                if (dist[u2] == INF) { dist[u2] = dist[u] + 1; q.push(u2); }
            }
        }
        return reachable_free;
    }

    bool dfs(vertex_id u) {
        auto nbrs = neighbors(u);
        for (auto& i = scan[u]; i < static_cast<std::int64_t>(nbrs.size()); ++i) {
            vertex_id w = nbrs[i];
            vertex_id u2 = pair_right[w];
            if (u2 == -1 || (dist[u2] == dist[u] + 1 && dfs(u2))) {
                pair_left[u] = w;
                pair_right[w] = u;
                return true;
            }
        }
        dist[u] = INF;
        return false;
    }

    std::int64_t run() {
        std::int64_t matching = 0;
        for (vertex_id u : lefts)                       // greedy warm start
            for (vertex_id w : neighbors(u)) {
                if (pair_left[u] != -1) break;
                if (pair_right[w] == -1) {
                    pair_left[u] = w; pair_right[w] = u; ++matching;
                }
            }
        while (bfs()) {
            for (vertex_id u : lefts) scan[u] = 0;
            for (vertex_id u : lefts)
                if (pair_left[u] == -1 && dfs(u)) ++matching;
        }
        return matching;
    }
};

} // namespace detail

inline opt_value opt_bipartite(const instance& inst) {
    if (!inst.bipartite())
        throw not_bipartite("opt_bipartite requires an instance with a bipartition");
    std::vector<vertex_id> lefts;
    for (vertex_id v = 0; v < inst.n; ++v)
        if (inst.side[v] == 0) lefts.push_back(v);
    auto nbrs = [&inst](vertex_id u) { return inst.neighbors(u); };
    detail::hopcroft_karp<decltype(nbrs)> hk(inst.n, lefts, nbrs);
    std::int64_t matching = hk.run();

    opt_value opt;
    opt.half_units = 2 * matching;
    opt.edge_halves.assign(inst.edges.size(), 0);
    for (vertex_id u : lefts) {
        if (hk.pair_left[u] == -1) continue;
        vertex_id w = hk.pair_left[u];
        auto ns = inst.neighbors(u);
        auto es = inst.incident_edges(u);
        for (std::size_t i = 0; i < ns.size(); ++i)
            if (ns[i] == w) { opt.edge_halves[es[i]] = 2; break; }
    }
    return opt;
}

// Maximum fractional matching of an arbitrary graph.  The double cover puts
// one left copy and one right copy of every vertex; each original edge (u,v)
// appears as (u_left, v_right) and (v_left, u_right), which the instance's
// own adjacency already encodes by symmetry.  Half the cover matching is an
// optimal half-integral fractional matching.
inline opt_value opt_fractional_general(const instance& inst) {
    std::vector<vertex_id> lefts(inst.n);
    for (vertex_id v = 0; v < inst.n; ++v) lefts[v] = v;
    auto nbrs = [&inst](vertex_id u) { return inst.neighbors(u); };
    detail::hopcroft_karp<decltype(nbrs)> hk(inst.n, lefts, nbrs);
    std::int64_t matching = hk.run();

    opt_value opt;
    opt.half_units = matching;
    opt.edge_halves.assign(inst.edges.size(), 0);
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        auto [u, v] = inst.edges[e];
        std::int8_t halves = 0;
        if (hk.pair_left[u] == v) ++halves;
        if (hk.pair_left[v] == u) ++halves;
        opt.edge_halves[e] = halves;
    }
    return opt;
}

} // namespace fomatch
