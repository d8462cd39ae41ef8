#pragma once

// Water-filling in closed form: at each vertex's deadline the remaining unit
// of capacity is poured onto available neighbors, repeatedly raising the
// current minimum levels together.  The waterline is found by sort + prefix
// sums rather than dx discretization, and dual increments use the gain's
// exact antiderivative, so the primal/dual objectives agree to rounding.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "fomatch/constants.hpp"
#include "fomatch/gain.hpp"
#include "fomatch/instance.hpp"
#include "fomatch/numeric.hpp"
#include "fomatch/opt.hpp"

namespace fomatch {

// One raised level.  `index` addresses the levels span passed to pour();
// inside a pour_record it is the raised neighbor's vertex id instead.
struct level_raise {
    std::int32_t index = 0;
    double from = 0.0;
    double to = 0.0;
};

struct pour_result {
    double waterline = 1.0;   // final common level of everything raised
    double poured = 0.0;      // total mass distributed, = min(capacity, Σ(1-level))
    std::vector<level_raise> raises;
};

// Raise the minimum levels uniformly until `capacity` is spent or every
// level reaches 1.  Levels need not arrive sorted; raises report positions
// in the input span.  Empty input pours nothing (waterline 1 by convention).
inline pour_result pour(std::span<const double> levels, double capacity) {
    if (!(capacity >= 0.0 && capacity <= 1.0))
        throw capacity_out_of_range("pour: capacity " + std::to_string(capacity) +
                                    " outside [0,1]");
    for (double l : levels)
        if (!(l >= 0.0 && l <= 1.0))
            throw domain_error("pour: level " + std::to_string(l) + " outside [0,1]");

    pour_result res;
    const std::size_t d = levels.size();
    if (d == 0) return res;

    std::vector<std::int32_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return levels[a] < levels[b];
    });

    std::vector<double> ps(d + 1, 0.0);   // ps[j] = sum of the j lowest levels
    for (std::size_t j = 0; j < d; ++j) ps[j + 1] = ps[j] + levels[order[j]];
    const double deficit = static_cast<double>(d) - ps[d];

    if (capacity == 0.0) {
        res.waterline = levels[order[0]];
        return res;
    }

    double waterline = 1.0;
    double poured = std::min(capacity, deficit);
    for (std::size_t j = 1; j <= d; ++j) {
        double upper = (j < d) ? levels[order[j]] : 1.0;
        // Cost of bringing the j lowest levels up to `upper`; the tiny slack
        // keeps an exact-capacity boundary from slipping past the bracket.
        if (static_cast<double>(j) * upper - ps[j] >= capacity - 1e-18) {
            waterline = (ps[j] + capacity) / static_cast<double>(j);
            waterline = std::min(waterline, upper);
            poured = capacity;
            break;
        }
    }
    res.waterline = std::min(waterline, 1.0);
    res.poured = poured;
    for (std::size_t j = 0; j < d; ++j) {
        std::int32_t i = order[j];
        if (levels[i] >= res.waterline) break;
        res.raises.push_back({i, levels[i], res.waterline});
    }
    return res;
}

// Log entry for one deadline's pour; raises carry vertex ids.
struct pour_record {
    vertex_id active = -1;
    double capacity = 0.0;
    double waterline = 1.0;
    double poured = 0.0;
    std::vector<level_raise> raises;
};

struct fractional_outcome {
    std::string gain_name;
    std::vector<double> x;       // water-level per vertex (fractional degree)
    std::vector<double> p;       // passive level: x frozen at own deadline start
    std::vector<double> alpha;   // dual value per vertex
    std::vector<double> x_edge;  // fraction per edge, indexed like instance.edges
    std::vector<pour_record> pours;
    double total = 0.0;          // Σ x_edge
};

// Called at the start of each deadline, before that vertex pours; `x` is the
// current level vector.  Lets tests snapshot neighbor levels mid-run.
using deadline_observer = std::function<void(vertex_id, std::span<const double>)>;

inline fractional_outcome run_waterfill(const instance& inst, const gain_function& gain,
                                        const deadline_observer& observe = {}) {
    fractional_outcome out;
    out.gain_name = gain.name;
    out.x.assign(inst.n, 0.0);
    out.p.assign(inst.n, 0.0);
    out.alpha.assign(inst.n, 0.0);
    out.x_edge.assign(inst.edges.size(), 0.0);

    std::vector<double> levels;
    std::vector<vertex_id> nbr;
    std::vector<std::int64_t> eidx;

    for (std::size_t step = 0; step < inst.timeline.size(); ++step) {
        const event& ev = inst.timeline[step];
        if (ev.kind != event_kind::deadline) continue;
        const vertex_id u = ev.v;
        out.p[u] = out.x[u];
        if (observe) observe(u, std::span<const double>(out.x));

        nbr.clear(); eidx.clear(); levels.clear();
        auto ns = inst.neighbors(u);
        auto es = inst.incident_edges(u);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            vertex_id v = ns[i];
            if (inst.deadline_step[v] < static_cast<std::int64_t>(step)) continue;  // expired
            nbr.push_back(v);
            eidx.push_back(es[i]);
            levels.push_back(out.x[v]);
        }
        if (nbr.empty()) continue;   // nothing to pour onto

        double cap = std::max(0.0, 1.0 - out.x[u]);
        pour_result pr = pour(levels, cap);

        pour_record rec;
        rec.active = u;
        rec.capacity = cap;
        rec.waterline = pr.waterline;
        rec.poured = pr.poured;
        rec.raises.reserve(pr.raises.size());
        for (const level_raise& r : pr.raises) {
            const vertex_id v = nbr[r.index];
            const double d = r.to - r.from;
            out.x[v] = r.to;
            out.x_edge[eidx[r.index]] += d;
            out.x[u] += d;
            const double gd = gain.G(r.to) - gain.G(r.from);
            out.alpha[v] += gd;          // passive gain: ∫ g over the raise
            out.alpha[u] += d - gd;      // active gain: ∫ (1-g) over the raise
            rec.raises.push_back({v, r.from, r.to});
        }
        out.x[u] = std::min(out.x[u], 1.0);
        out.pours.push_back(std::move(rec));
    }

    neumaier_sum total;
    for (double xe : out.x_edge) total.add(xe);
    out.total = total.value();
    return out;
}

struct edge_violation {
    vertex_id u = -1, v = -1;
    double sum = 0.0;
};

struct cert_report {
    double min_edge_sum = std::numeric_limits<double>::infinity();
    double objective_gap = 0.0;
    double ratio = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::vector<edge_violation> violations;
};

// Dual certificate: every edge's dual sum clears `ratio`, and the dual
// objective tracks the primal one.  Compensated sums keep the agreement
// check meaningful at millions of edges.
inline cert_report certify_duals(const fractional_outcome& out, const instance& inst,
                                 double ratio = water_ratio(), double tol = 1e-9) {
    if (static_cast<vertex_id>(out.x.size()) != inst.n ||
        static_cast<vertex_id>(out.alpha.size()) != inst.n ||
        out.x_edge.size() != inst.edges.size())
        throw mismatched_outcome("certify_duals: outcome shape does not match instance");

    cert_report rep;
    rep.ratio = ratio;
    rep.tol = tol;

    neumaier_sum sum_alpha, sum_x;
    for (double a : out.alpha) sum_alpha.add(a);
    for (double xe : out.x_edge) sum_x.add(xe);
    rep.objective_gap = std::abs(sum_alpha.value() - sum_x.value());

    for (const auto& [u, v] : inst.edges) {
        double s = out.alpha[u] + out.alpha[v];
        rep.min_edge_sum = std::min(rep.min_edge_sum, s);
        if (s < ratio - tol) rep.violations.push_back({u, v, s});
    }
    rep.pass = rep.violations.empty() && rep.objective_gap <= tol;
    return rep;
}

// Σ x_uv divided by the offline optimum (fractional on general graphs,
// integral = fractional on bipartite ones).
inline double achieved_ratio(const fractional_outcome& out, const instance& inst) {
    if (out.x_edge.size() != inst.edges.size())
        throw mismatched_outcome("achieved_ratio: outcome shape does not match instance");
    opt_value opt = inst.bipartite() ? opt_bipartite(inst) : opt_fractional_general(inst);
    if (opt.half_units == 0)
        throw zero_opt("achieved_ratio: offline optimum is zero");
    neumaier_sum total;
    for (double xe : out.x_edge) total.add(xe);
    return total.value() / opt.value();
}

} // namespace fomatch
