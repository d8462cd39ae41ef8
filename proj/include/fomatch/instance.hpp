#pragma once

// Core data model for fully online matching.
//
// An instance is a graph plus a strict timeline of arrival/deadline events,
// one of each per vertex.  Every edge is revealed when its later endpoint
// arrives, and both endpoints of an edge must arrive before either endpoint
// reaches its deadline — that containment is the fully-online property and
// is validated at construction.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fomatch/errors.hpp"

namespace fomatch {

using vertex_id = std::int32_t;

enum class event_kind : std::uint8_t { arrival, deadline };

struct event {
    event_kind kind;
    vertex_id v;
    friend bool operator==(const event&, const event&) = default;
};

struct instance {
    vertex_id n = 0;
    std::vector<std::pair<vertex_id, vertex_id>> edges; // normalized u<v, sorted, unique
    std::vector<event> timeline;                        // index = step (strict total order)
    std::vector<std::uint8_t> side;                     // empty unless bipartitioned

    // Derived at build time.
    std::vector<std::int32_t> arrival_step;
    std::vector<std::int32_t> deadline_step;
    std::vector<vertex_id> deadline_order;              // vertices by deadline step
    std::vector<std::int64_t> adj_start;                // CSR offsets, size n+1
    std::vector<vertex_id> adj_vertex;
    std::vector<std::int32_t> adj_edge;                 // edge index parallel to adj_vertex

    bool bipartite() const { return !side.empty(); }

    std::span<const vertex_id> neighbors(vertex_id v) const {
        return {adj_vertex.data() + adj_start[v],
                adj_vertex.data() + adj_start[v + 1]};
    }
    std::span<const std::int32_t> incident_edges(vertex_id v) const {
        return {adj_edge.data() + adj_start[v],
                adj_edge.data() + adj_start[v + 1]};
    }
    std::int64_t degree(vertex_id v) const { return adj_start[v + 1] - adj_start[v]; }
};

namespace detail {

inline void build_derived(instance& inst) {
    const vertex_id n = inst.n;
    inst.arrival_step.assign(n, -1);
    inst.deadline_step.assign(n, -1);
    for (std::size_t s = 0; s < inst.timeline.size(); ++s) {
        const event& e = inst.timeline[s];
        if (e.v < 0 || e.v >= n)
            throw missing_event("timeline references unknown vertex " + std::to_string(e.v));
        auto& slot = (e.kind == event_kind::arrival) ? inst.arrival_step[e.v]
                                                     : inst.deadline_step[e.v];
        if (slot != -1)
            throw missing_event("vertex " + std::to_string(e.v) +
                                " has a repeated timeline event");
        slot = static_cast<std::int32_t>(s);
    }
    for (vertex_id v = 0; v < n; ++v) {
        if (inst.arrival_step[v] == -1 || inst.deadline_step[v] == -1)
            throw missing_event("vertex " + std::to_string(v) +
                                " lacks an arrival or a deadline");
        if (inst.arrival_step[v] >= inst.deadline_step[v])
            throw fully_online_violation("vertex " + std::to_string(v) +
                                         " arrives at or after its own deadline");
    }
    inst.deadline_order.clear();
    inst.deadline_order.reserve(n);
    for (const event& e : inst.timeline)
        if (e.kind == event_kind::deadline) inst.deadline_order.push_back(e.v);

    // CSR adjacency; edges are sorted, so per-vertex neighbor lists come out
    // ordered by (neighbor id) for the smaller endpoint and by edge order for
    // the larger — sort each list by id for a canonical layout.
    inst.adj_start.assign(n + 1, 0);
    for (const auto& [u, v] : inst.edges) {
        ++inst.adj_start[u + 1];
        ++inst.adj_start[v + 1];
    }
    for (vertex_id v = 0; v < n; ++v) inst.adj_start[v + 1] += inst.adj_start[v];
    inst.adj_vertex.assign(inst.adj_start[n], 0);
    inst.adj_edge.assign(inst.adj_start[n], 0);
    std::vector<std::int64_t> cursor(inst.adj_start.begin(), inst.adj_start.end() - 1);
    for (std::size_t e = 0; e < inst.edges.size(); ++e) {
        auto [u, v] = inst.edges[e];
        inst.adj_vertex[cursor[u]] = v;
        inst.adj_edge[cursor[u]++] = static_cast<std::int32_t>(e);
        inst.adj_vertex[cursor[v]] = u;
        inst.adj_edge[cursor[v]++] = static_cast<std::int32_t>(e);
    }
    for (vertex_id v = 0; v < n; ++v) {
        auto b = inst.adj_start[v], e = inst.adj_start[v + 1];
        std::vector<std::int32_t> idx(e - b);
        for (std::int64_t i = 0; i < e - b; ++i) idx[i] = static_cast<std::int32_t>(i);
        std::sort(idx.begin(), idx.end(), [&](std::int32_t a, std::int32_t c) {
            return inst.adj_vertex[b + a] < inst.adj_vertex[b + c];
        });
        std::vector<vertex_id> nv(e - b);
        std::vector<std::int32_t> ne(e - b);
        for (std::int64_t i = 0; i < e - b; ++i) {
            nv[i] = inst.adj_vertex[b + idx[i]];
            ne[i] = inst.adj_edge[b + idx[i]];
        }
        std::copy(nv.begin(), nv.end(), inst.adj_vertex.begin() + b);
        std::copy(ne.begin(), ne.end(), inst.adj_edge.begin() + b);
    }
}

} // namespace detail

// Validates and finishes an instance.  Throws the typed error naming the
// first violated invariant.
inline instance build_instance(vertex_id n,
                               std::vector<std::pair<vertex_id, vertex_id>> edges,
                               std::vector<event> timeline,
                               std::vector<std::uint8_t> side = {}) {
    if (n < 0) throw missing_event("negative vertex count");
    instance inst;
    inst.n = n;
    for (auto& [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw missing_event("edge endpoint out of range");
        if (u == v) throw self_loop("self loop at vertex " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t e = 1; e < edges.size(); ++e)
        if (edges[e] == edges[e - 1])
            throw duplicate_edge("duplicate edge (" + std::to_string(edges[e].first) +
                                 "," + std::to_string(edges[e].second) + ")");
    inst.edges = std::move(edges);
    if (timeline.size() != static_cast<std::size_t>(2) * static_cast<std::size_t>(n))
        throw missing_event("timeline must hold exactly one arrival and one deadline per vertex");
    inst.timeline = std::move(timeline);
    detail::build_derived(inst);

    for (const auto& [u, v] : inst.edges) {
        if (inst.arrival_step[u] >= inst.deadline_step[v] ||
            inst.arrival_step[v] >= inst.deadline_step[u])
            throw fully_online_violation("edge (" + std::to_string(u) + "," +
                                         std::to_string(v) +
                                         ") has an endpoint arriving after the other's deadline");
    }
    if (!side.empty()) {
        if (side.size() != static_cast<std::size_t>(n))
            throw bipartition_violation("bipartition size mismatch");
        for (auto f : side)
            if (f != 0 && f != 1)
                throw bipartition_violation("bipartition flag must be 0 or 1");
        for (const auto& [u, v] : inst.edges)
            if (side[u] == side[v])
                throw bipartition_violation("edge (" + std::to_string(u) + "," +
                                            std::to_string(v) + ") does not cross the bipartition");
        inst.side = std::move(side);
    }
    return inst;
}

// Builds an instance from a deadline permutation alone.  Arrivals are
// synthesized as late as legal: each vertex arrives immediately before the
// earliest deadline among itself and its neighbors (ties resolved by vertex
// id).  Late arrivals reveal the least information, which is what the
// adversarial constructions rely on.
inline instance from_deadline_order(vertex_id n,
                                    std::vector<std::pair<vertex_id, vertex_id>> edges,
                                    const std::vector<vertex_id>& deadline_order,
                                    std::vector<std::uint8_t> side = {}) {
    if (deadline_order.size() != static_cast<std::size_t>(n))
        throw missing_event("deadline order must list every vertex once");
    std::vector<std::int32_t> pos(n, -1);
    for (std::size_t i = 0; i < deadline_order.size(); ++i) {
        vertex_id v = deadline_order[i];
        if (v < 0 || v >= n || pos[v] != -1)
            throw missing_event("deadline order is not a permutation");
        pos[v] = static_cast<std::int32_t>(i);
    }
    std::vector<std::int32_t> trigger(n); // deadline position the arrival precedes
    for (vertex_id v = 0; v < n; ++v) trigger[v] = pos[v];
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw missing_event("edge endpoint out of range");
        trigger[u] = std::min(trigger[u], pos[v]);
        trigger[v] = std::min(trigger[v], pos[u]);
    }
    std::vector<std::vector<vertex_id>> arrivals_before(n);
    for (vertex_id v = 0; v < n; ++v) arrivals_before[trigger[v]].push_back(v);
    std::vector<event> timeline;
    timeline.reserve(2 * static_cast<std::size_t>(n));
    for (vertex_id i = 0; i < n; ++i) {
        auto& group = arrivals_before[i];
        std::sort(group.begin(), group.end());
        for (vertex_id v : group) timeline.push_back({event_kind::arrival, v});
        timeline.push_back({event_kind::deadline, deadline_order[i]});
    }
    return build_instance(n, std::move(edges), std::move(timeline), std::move(side));
}

// Neighbors of u that are still available when u's deadline is processed:
// deadline strictly later than `step`, and not already matched if a matched
// mask is supplied.  `step` must be u's own deadline step.
inline std::vector<vertex_id> available_neighbors(const instance& inst, vertex_id u,
                                                  std::int32_t step,
                                                  const std::vector<char>* matched = nullptr) {
    if (u < 0 || u >= inst.n || inst.deadline_step[u] != step)
        throw not_at_deadline("vertex " + std::to_string(u) +
                              " is not at its deadline at step " + std::to_string(step));
    std::vector<vertex_id> out;
    for (vertex_id w : inst.neighbors(u)) {
        if (inst.deadline_step[w] <= step) continue;
        if (matched && (*matched)[w]) continue;
        out.push_back(w);
    }
    return out;
}

} // namespace fomatch
