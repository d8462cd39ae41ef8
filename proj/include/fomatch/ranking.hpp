#pragma once

// Integral matching by rank order.  Every vertex draws a rank in [0,1); an
// unmatched vertex at its deadline grabs its minimum-rank unmatched neighbor
// (the grabber is "active", the grabbed "passive") and the gain of the edge
// is shared through a piecewise gain function of the passive rank.
//
// Because the matching is piecewise-constant in any single vertex's rank,
// counterfactual quantities (marginal ranks, expectations over one or two
// ranks) are computed EXACTLY: simulate once per cell of the breakpoint grid
// and integrate the gain function in closed form on each cell.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fomatch/constants.hpp"
#include "fomatch/errors.hpp"
#include "fomatch/instance.hpp"
#include "fomatch/numeric.hpp"
#include "fomatch/opt.hpp"
#include "fomatch/rng.hpp"

namespace fomatch {

// ---------------------------------------------------------------------------
// Gain sharing
// ---------------------------------------------------------------------------

// Piecewise gain applied to the passive endpoint's rank:
//   g(y) = c/(1-y)   on [0, plateau_start)
//        = plateau   on [plateau_start, 1)
//        = 1         at y = 1.
// G is the antiderivative with G(0) = 0 and H(y) = integral of s*g(s) over
// [0,y]; both are exact for whatever field values the struct carries, so a
// deliberately perturbed gain (e.g. a different plateau) stays consistent.
struct ranking_gain {
    double c = 0.0;             // g(0), and the scale of the hyperbolic piece
    double plateau_start = 0.0; // where the hyperbolic piece stops
    double plateau = 0.0;       // constant value on [plateau_start, 1)

    // The gain that certifies the Omega guarantee: c = 1/(1+e^Omega),
    // plateau_start = (1-2c)/(1-c), plateau = 1-c.  Continuous on [0,1).
    static ranking_gain standard() {
        const double cc = rank_gain_constant();
        return ranking_gain{cc, (1.0 - 2.0 * cc) / (1.0 - cc), 1.0 - cc};
    }

    double g(double y) const {
        if (y >= 1.0) return 1.0;
        if (y < plateau_start) return c / (1.0 - y);
        return plateau;
    }
    double G(double y) const {
        if (y <= plateau_start) return -c * std::log1p(-y);
        return -c * std::log1p(-plateau_start) + plateau * (y - plateau_start);
    }
    double H(double y) const {
        if (y <= plateau_start) return c * (-std::log1p(-y) - y);
        return c * (-std::log1p(-plateau_start) - plateau_start) +
               0.5 * plateau * (y * y - plateau_start * plateau_start);
    }
};

// ---------------------------------------------------------------------------
// The matching sweep
// ---------------------------------------------------------------------------

enum class match_role : std::uint8_t { unmatched = 0, active = 1, passive = 2 };

struct integral_outcome {
    std::vector<match_role> role;
    std::vector<vertex_id> partner;                   // -1 when unmatched
    std::vector<std::int32_t> partner_deadline_step;  // passive vertices only, else -1
    std::vector<double> partner_rank;                 // active vertices only, else -1
    std::vector<double> alpha;
    std::vector<std::pair<vertex_id, vertex_id>> matches;  // (active, passive)

    std::int64_t matched_pairs() const { return static_cast<std::int64_t>(matches.size()); }
};

// Deterministic sweep of the deadline order.  At an unmatched, non-excluded
// vertex's deadline, match it (active) to its minimum-rank unmatched
// available neighbor (passive); duals are alpha_active = 1 - g(y_passive),
// alpha_passive = g(y_passive).  Ranks are assumed pairwise distinct; an
// exact tie breaks to the smaller id so the sweep stays deterministic.
// A nonempty `excluded` mask removes vertices (and their edges) entirely.
inline integral_outcome run_ranking(const instance& inst, const std::vector<double>& ranks,
                                    const ranking_gain& gain = ranking_gain::standard(),
                                    const std::vector<std::uint8_t>& excluded = {}) {
    if (static_cast<vertex_id>(ranks.size()) != inst.n)
        throw domain_error("run_ranking: rank vector has " + std::to_string(ranks.size()) +
                           " entries for " + std::to_string(inst.n) + " vertices");
    if (!excluded.empty() && static_cast<vertex_id>(excluded.size()) != inst.n)
        throw domain_error("run_ranking: excluded mask has wrong size");
    const bool has_mask = !excluded.empty();

    integral_outcome out;
    out.role.assign(inst.n, match_role::unmatched);
    out.partner.assign(inst.n, -1);
    out.partner_deadline_step.assign(inst.n, -1);
    out.partner_rank.assign(inst.n, -1.0);
    out.alpha.assign(inst.n, 0.0);

    for (vertex_id v : inst.deadline_order) {
        if (has_mask && excluded[v]) continue;
        if (out.role[v] != match_role::unmatched) continue;
        const std::int32_t step = inst.deadline_step[v];
        vertex_id best = -1;
        for (vertex_id w : inst.neighbors(v)) {
            if (has_mask && excluded[w]) continue;
            if (out.role[w] != match_role::unmatched) continue;
            if (inst.deadline_step[w] <= step) continue;  // already expired
            if (best < 0 || ranks[w] < ranks[best] ||
                (ranks[w] == ranks[best] && w < best))
                best = w;
        }
        if (best < 0) continue;
        out.role[v] = match_role::active;
        out.role[best] = match_role::passive;
        out.partner[v] = best;
        out.partner[best] = v;
        out.partner_rank[v] = ranks[best];
        out.partner_deadline_step[best] = step;
        const double gp = gain.g(ranks[best]);
        out.alpha[v] = 1.0 - gp;
        out.alpha[best] = gp;
        out.matches.emplace_back(v, best);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Marginal ranks
// ---------------------------------------------------------------------------

namespace detail {

// Sorted distinct breakpoints of the matching as a function of one or two
// free ranks: 0, 1, and the ranks of every participating vertex not listed
// in `skip`.  The matching is constant strictly between consecutive entries.
inline std::vector<double> rank_breakpoints(const instance& inst,
                                            const std::vector<double>& ranks,
                                            std::span<const vertex_id> skip,
                                            const std::vector<std::uint8_t>& excluded = {}) {
    std::vector<double> b;
    b.reserve(static_cast<std::size_t>(inst.n) + 2);
    b.push_back(0.0);
    b.push_back(1.0);
    for (vertex_id w = 0; w < inst.n; ++w) {
        if (!excluded.empty() && excluded[w]) continue;
        if (std::find(skip.begin(), skip.end(), w) != skip.end()) continue;
        if (ranks[w] > 0.0 && ranks[w] < 1.0) b.push_back(ranks[w]);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

inline void insert_breakpoint(std::vector<double>& b, double x) {
    if (x <= b.front() || x >= b.back()) return;
    auto it = std::lower_bound(b.begin(), b.end(), x);
    if (it == b.end() || *it != x) b.insert(it, x);
}

}  // namespace detail

// Largest rank below which `v` ends up passive: the matching is constant on
// each open interval between breakpoints, so run once at every interval
// midpoint and return the right endpoint of the highest interval where v is
// passive.  0 if v is never passive, 1 if it is passive in the top interval.
inline double marginal_rank(const instance& inst, vertex_id v, std::vector<double> ranks,
                            const std::vector<std::uint8_t>& excluded = {}) {
    if (v < 0 || v >= inst.n)
        throw domain_error("marginal_rank: vertex " + std::to_string(v) + " out of range");
    if (!excluded.empty() && excluded[v])
        throw domain_error("marginal_rank: vertex " + std::to_string(v) + " is excluded");
    const vertex_id skip[] = {v};
    const auto brk = detail::rank_breakpoints(inst, ranks, skip, excluded);
    const ranking_gain gain = ranking_gain::standard();
    double theta = 0.0;
    for (std::size_t i = 1; i < brk.size(); ++i) {
        if (!(brk[i] > brk[i - 1])) continue;
        ranks[v] = 0.5 * (brk[i - 1] + brk[i]);
        const auto out = run_ranking(inst, ranks, gain, excluded);
        if (out.role[v] == match_role::passive) theta = brk[i];
    }
    return theta;
}

// ---------------------------------------------------------------------------
// Thresholds of a neighboring pair
// ---------------------------------------------------------------------------

struct theta_sample {
    double y_u = 0.0;
    double theta = 0.0;
};

struct threshold_report {
    vertex_id u = -1, v = -1;
    double tau = 0.0;    // marginal rank of u with v deleted
    double gamma = 0.0;  // marginal rank of v with u deleted
    double theta = 1.0;  // common value of theta(y_u) over y_u > tau (1 if that region is empty)
    std::vector<theta_sample> theta_samples;
    bool gamma_bound_pass = false;  // theta(y_u) >= gamma at every sample
    bool constancy_pass = false;    // theta(y_u) identical across all samples with y_u > tau
};

namespace detail {

inline void require_ordered_edge(const instance& inst, vertex_id u, vertex_id v,
                                 const char* who) {
    if (u < 0 || u >= inst.n || v < 0 || v >= inst.n || u == v)
        throw domain_error(std::string(who) + ": invalid vertex pair");
    const auto nb = inst.neighbors(u);
    if (std::find(nb.begin(), nb.end(), v) == nb.end())
        throw domain_error(std::string(who) + ": (" + std::to_string(u) + "," +
                           std::to_string(v) + ") is not an edge");
    if (!(inst.deadline_step[u] < inst.deadline_step[v]))
        throw domain_error(std::string(who) + ": vertex " + std::to_string(u) +
                           " must reach its deadline before vertex " + std::to_string(v));
}

}  // namespace detail

// tau, gamma, and the map y_u -> theta(y_u) sampled at the midpoints of the
// y_u breakpoint grid.  Also verifies theta(y_u) >= gamma everywhere and that
// theta(y_u) is a single constant on y_u > tau; the latter is load-bearing
// for the ratio certificate, so on bipartitioned instances a violation
// throws unless `throw_on_violation` is false.
inline threshold_report thresholds(const instance& inst, vertex_id u, vertex_id v,
                                   std::vector<double> ranks,
                                   bool throw_on_violation = true) {
    detail::require_ordered_edge(inst, u, v, "thresholds");
    if (static_cast<vertex_id>(ranks.size()) != inst.n)
        throw domain_error("thresholds: rank vector has wrong size");

    threshold_report rep;
    rep.u = u;
    rep.v = v;

    std::vector<std::uint8_t> mask(static_cast<std::size_t>(inst.n), 0);
    mask[static_cast<std::size_t>(v)] = 1;
    rep.tau = marginal_rank(inst, u, ranks, mask);
    mask[static_cast<std::size_t>(v)] = 0;
    mask[static_cast<std::size_t>(u)] = 1;
    rep.gamma = marginal_rank(inst, v, ranks, mask);

    const vertex_id skip[] = {u, v};
    auto brk = detail::rank_breakpoints(inst, ranks, skip);
    detail::insert_breakpoint(brk, rep.tau);

    rep.gamma_bound_pass = true;
    bool have_tail = false;
    bool constant = true;
    for (std::size_t i = 1; i < brk.size(); ++i) {
        if (!(brk[i] > brk[i - 1])) continue;
        const double y_u = 0.5 * (brk[i - 1] + brk[i]);
        ranks[u] = y_u;
        const double th = marginal_rank(inst, v, ranks);
        rep.theta_samples.push_back({y_u, th});
        if (th < rep.gamma) rep.gamma_bound_pass = false;
        if (y_u > rep.tau) {
            if (!have_tail) {
                rep.theta = th;
                have_tail = true;
            } else if (th != rep.theta) {
                constant = false;
            }
        }
    }
    rep.constancy_pass = constant;
    if (!constant && inst.bipartite() && throw_on_violation)
        throw constancy_violation("thresholds: theta(y_u) is not constant above tau=" +
                                  std::to_string(rep.tau) + " for edge (" + std::to_string(u) +
                                  "," + std::to_string(v) + ")");
    return rep;
}

// ---------------------------------------------------------------------------
// Exact expectations over one or two ranks
// ---------------------------------------------------------------------------

namespace detail {

// alpha of endpoint `x` on a cell, written as a + bu*g(y_u) + bv*g(y_v).
// Within a cell the matching (hence every role and partner) is constant, so
// the only dependence on (y_u, y_v) is through the passive-rank gain.
struct gain_coeffs {
    double a = 0.0, bu = 0.0, bv = 0.0;

    gain_coeffs& axpy(double w, const gain_coeffs& o) {
        a += w * o.a;
        bu += w * o.bu;
        bv += w * o.bv;
        return *this;
    }
};

inline gain_coeffs alpha_coeffs(const integral_outcome& out, const std::vector<double>& ranks,
                                const ranking_gain& gain, vertex_id x, vertex_id u,
                                vertex_id v) {
    gain_coeffs cf;
    switch (out.role[x]) {
        case match_role::unmatched:
            break;
        case match_role::passive:
            if (x == u)
                cf.bu = 1.0;
            else if (x == v)
                cf.bv = 1.0;
            else
                cf.a = gain.g(ranks[x]);
            break;
        case match_role::active: {
            const vertex_id p = out.partner[x];
            if (p == u) {
                cf.a = 1.0;
                cf.bu = -1.0;
            } else if (p == v) {
                cf.a = 1.0;
                cf.bv = -1.0;
            } else {
                cf.a = 1.0 - gain.g(ranks[p]);
            }
            break;
        }
    }
    return cf;
}

// Integral over the unit square of
//   [y_u < u_below] * alpha_u + [y_v < v_below] * alpha_v
// (an absent cutoff means weight 1).  Cells are products of breakpoint
// intervals; off-diagonal cells need one simulation at the midpoint pair,
// diagonal cells one per triangle (the relative order of y_u and y_v matters
// there).  The gain integrates in closed form via G and H:
//   over {a <= y_v <= y_u <= b}:  int g(y_u) = H(b)-H(a) - a(G(b)-G(a)),
//                                 int g(y_v) = b(G(b)-G(a)) - (H(b)-H(a)).
inline double integrate_pair_gain(const instance& inst, vertex_id u, vertex_id v,
                                  std::vector<double> ranks, const ranking_gain& gain,
                                  std::optional<double> u_below, std::optional<double> v_below,
                                  std::int64_t* cells_out = nullptr) {
    const vertex_id skip[] = {u, v};
    auto brk = rank_breakpoints(inst, ranks, skip);
    if (u_below) insert_breakpoint(brk, *u_below);
    if (v_below) insert_breakpoint(brk, *v_below);
    const auto nb = static_cast<std::int64_t>(brk.size());
    if (nb * nb > 4096)
        throw too_large_for_exhaustive("exact rank integration needs " + std::to_string(nb * nb) +
                                       " cells (limit 4096); use the sampling mode instead");

    neumaier_sum total;
    std::int64_t cells = 0;
    for (std::size_t i = 1; i < brk.size(); ++i) {
        const double a1 = brk[i - 1], b1 = brk[i];
        if (!(b1 > a1)) continue;
        const double wu = (!u_below || b1 <= *u_below) ? 1.0 : 0.0;
        for (std::size_t j = 1; j < brk.size(); ++j) {
            const double a2 = brk[j - 1], b2 = brk[j];
            if (!(b2 > a2)) continue;
            const double wv = (!v_below || b2 <= *v_below) ? 1.0 : 0.0;
            ++cells;
            if (wu == 0.0 && wv == 0.0) continue;
            if (i != j) {
                ranks[u] = 0.5 * (a1 + b1);
                ranks[v] = 0.5 * (a2 + b2);
                const auto out = run_ranking(inst, ranks, gain);
                gain_coeffs cf;
                cf.axpy(wu, alpha_coeffs(out, ranks, gain, u, u, v));
                cf.axpy(wv, alpha_coeffs(out, ranks, gain, v, u, v));
                const double Gu = gain.G(b1) - gain.G(a1);
                const double Gv = gain.G(b2) - gain.G(a2);
                total.add(cf.a * (b1 - a1) * (b2 - a2) + cf.bu * Gu * (b2 - a2) +
                          cf.bv * (b1 - a1) * Gv);
            } else {
                const double a = a1, b = b1, w = b1 - a1;
                const double Gd = gain.G(b) - gain.G(a);
                const double Hd = gain.H(b) - gain.H(a);
                // y_v < y_u half
                ranks[u] = a + 2.0 * w / 3.0;
                ranks[v] = a + w / 3.0;
                auto out = run_ranking(inst, ranks, gain);
                gain_coeffs lo;
                lo.axpy(wu, alpha_coeffs(out, ranks, gain, u, u, v));
                lo.axpy(wv, alpha_coeffs(out, ranks, gain, v, u, v));
                total.add(lo.a * 0.5 * w * w + lo.bu * (Hd - a * Gd) + lo.bv * (b * Gd - Hd));
                // y_u < y_v half
                ranks[u] = a + w / 3.0;
                ranks[v] = a + 2.0 * w / 3.0;
                out = run_ranking(inst, ranks, gain);
                gain_coeffs hi;
                hi.axpy(wu, alpha_coeffs(out, ranks, gain, u, u, v));
                hi.axpy(wv, alpha_coeffs(out, ranks, gain, v, u, v));
                total.add(hi.a * 0.5 * w * w + hi.bu * (b * Gd - Hd) + hi.bv * (Hd - a * Gd));
            }
        }
    }
    if (cells_out) *cells_out = cells;
    return total.value();
}

// Integral over y_v in [0,1], with every other rank (including y_u) fixed, of
//   alpha_u + [y_v > v_above] * alpha_v     (absent cutoff: weight 1).
inline double integrate_v_gain(const instance& inst, vertex_id u, vertex_id v,
                               std::vector<double> ranks, const ranking_gain& gain,
                               std::optional<double> v_above) {
    const vertex_id skip[] = {v};
    auto brk = rank_breakpoints(inst, ranks, skip);
    if (v_above) insert_breakpoint(brk, *v_above);
    neumaier_sum total;
    for (std::size_t j = 1; j < brk.size(); ++j) {
        const double a = brk[j - 1], b = brk[j];
        if (!(b > a)) continue;
        const double wv = (!v_above || a >= *v_above) ? 1.0 : 0.0;
        ranks[v] = 0.5 * (a + b);
        const auto out = run_ranking(inst, ranks, gain);
        gain_coeffs cf;
        cf.axpy(1.0, alpha_coeffs(out, ranks, gain, u, u, v));
        cf.axpy(wv, alpha_coeffs(out, ranks, gain, v, u, v));
        // y_u is fixed here, so the bu term is a constant on the cell.
        const double c0 = cf.a + cf.bu * gain.g(ranks[u]);
        total.add(c0 * (b - a) + cf.bv * (gain.G(b) - gain.G(a)));
    }
    return total.value();
}

}  // namespace detail

enum class gain_mode { exhaustive, montecarlo };

struct edge_gain_result {
    double value = 0.0;
    double stderr_ = 0.0;    // zero in exhaustive mode
    std::int64_t cells = 0;  // integration cells (exhaustive mode)
    std::int64_t trials = 0; // samples (montecarlo mode)
};

// E over independent uniform (y_u, y_v) of alpha_u + alpha_v, all other
// ranks held fixed.  Exhaustive mode integrates exactly on the breakpoint
// grid (throws too_large_for_exhaustive past 4096 cells); montecarlo mode
// redraws the two ranks `trials` times and reports mean and standard error.
inline edge_gain_result expected_edge_gain(const instance& inst, vertex_id u, vertex_id v,
                                           std::vector<double> ranks, gain_mode mode,
                                           const ranking_gain& gain = ranking_gain::standard(),
                                           std::int64_t trials = 20000,
                                           std::uint64_t seed = 42) {
    detail::require_ordered_edge(inst, u, v, "expected_edge_gain");
    if (static_cast<vertex_id>(ranks.size()) != inst.n)
        throw domain_error("expected_edge_gain: rank vector has wrong size");
    edge_gain_result res;
    if (mode == gain_mode::exhaustive) {
        res.value = detail::integrate_pair_gain(inst, u, v, std::move(ranks), gain,
                                                std::nullopt, std::nullopt, &res.cells);
        return res;
    }
    if (trials <= 0) throw domain_error("expected_edge_gain: trials must be positive");
    neumaier_sum sum, sumsq;
    std::mt19937_64 eng = make_engine(seed);
    for (std::int64_t t = 0; t < trials; ++t) {
        ranks[u] = uniform01(eng);
        ranks[v] = uniform01(eng);
        const auto out = run_ranking(inst, ranks, gain);
        const double s = out.alpha[u] + out.alpha[v];
        sum.add(s);
        sumsq.add(s * s);
    }
    const double n = static_cast<double>(trials);
    res.trials = trials;
    res.value = sum.value() / n;
    if (trials > 1) {
        const double var = std::max(0.0, (sumsq.value() - n * res.value * res.value) / (n - 1.0));
        res.stderr_ = std::sqrt(var / n);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Identity and bound checks for a neighboring pair
// ---------------------------------------------------------------------------

// E[alpha_u * 1(y_u < tau) + alpha_v * 1(y_v < gamma)] = G(tau) + G(gamma):
// below its own threshold an endpoint is always passive, and a passive rank y
// contributes exactly g(y).  Checked by exact integration.
struct identity_check_report {
    double tau = 0.0, gamma = 0.0;
    double lhs = 0.0, rhs = 0.0, residual = 0.0;
    bool pass = false;
};

inline identity_check_report check_threshold_gain_identity(
    const instance& inst, vertex_id u, vertex_id v, const std::vector<double>& ranks,
    const ranking_gain& gain = ranking_gain::standard(), double tol = 1e-9) {
    identity_check_report rep;
    const auto th = thresholds(inst, u, v, ranks);
    rep.tau = th.tau;
    rep.gamma = th.gamma;
    rep.lhs = detail::integrate_pair_gain(inst, u, v, ranks, gain, th.tau, th.gamma);
    rep.rhs = gain.G(th.tau) + gain.G(th.gamma);
    rep.residual = std::abs(rep.lhs - rep.rhs);
    rep.pass = rep.residual <= tol;
    return rep;
}

struct gain_bound_sample {
    double y_u = 0.0;
    double theta = 0.0;
    double lhs = 0.0, rhs = 0.0;
};

struct gain_bound_report {
    double tau = 0.0, gamma = 0.0;
    std::vector<gain_bound_sample> samples;
    double min_margin = std::numeric_limits<double>::infinity();  // min over samples of lhs-rhs
    bool pass = false;
};

// Tail bound: for every fixed y_u > tau,
//   E_{y_v}[alpha_u + alpha_v * 1(y_v > gamma)]
//     >= 1 - gamma - (1-theta) g(theta) + gamma * min{g(y_u), 1 - g(theta)}
// with theta = theta(y_u).  The left side is integrated exactly in y_v at
// each midpoint of the y_u grid above tau.
inline gain_bound_report check_tail_gain_bound(const instance& inst, vertex_id u, vertex_id v,
                                               std::vector<double> ranks,
                                               const ranking_gain& gain = ranking_gain::standard(),
                                               double tol = 1e-9) {
    const auto th = thresholds(inst, u, v, ranks);
    gain_bound_report rep;
    rep.tau = th.tau;
    rep.gamma = th.gamma;

    const vertex_id skip[] = {u, v};
    auto brk = detail::rank_breakpoints(inst, ranks, skip);
    detail::insert_breakpoint(brk, th.tau);
    for (std::size_t i = 1; i < brk.size(); ++i) {
        if (!(brk[i] > brk[i - 1]) || brk[i - 1] < th.tau) continue;
        gain_bound_sample s;
        s.y_u = 0.5 * (brk[i - 1] + brk[i]);
        ranks[u] = s.y_u;
        s.theta = marginal_rank(inst, v, ranks);
        s.lhs = detail::integrate_v_gain(inst, u, v, ranks, gain, th.gamma);
        const double gt = gain.g(s.theta);
        s.rhs = 1.0 - th.gamma - (1.0 - s.theta) * gt +
                th.gamma * std::min(gain.g(s.y_u), 1.0 - gt);
        rep.min_margin = std::min(rep.min_margin, s.lhs - s.rhs);
        rep.samples.push_back(s);
    }
    rep.pass = rep.samples.empty() || rep.min_margin >= -tol;
    return rep;
}

// Exact minimum over theta in [0,1] of G(theta) + min{1 - g(theta), gu} for
// the piecewise gain.  On the hyperbolic piece the summand is increasing up
// to the crossing g(theta) = 1 - gu and decreasing after it, and on the
// plateau it is increasing again, so the minimum is attained at 0, the
// crossing, the plateau start, or 1; all four are evaluated.
inline double single_threshold_floor(const ranking_gain& gain, double gu) {
    double cands[4];
    int nc = 0;
    cands[nc++] = 0.0;
    cands[nc++] = gain.plateau_start;
    cands[nc++] = 1.0;
    if (gu < 1.0 && 1.0 - gu > 0.0 && gain.c > 0.0) {
        const double cross = 1.0 - gain.c / (1.0 - gu);
        if (cross > 0.0 && cross < gain.plateau_start) cands[nc++] = cross;
    }
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nc; ++i) {
        const double th = cands[i];
        best = std::min(best, gain.G(th) + std::min(1.0 - gain.g(th), gu));
    }
    return best;
}

// Single-threshold floor: for every fixed y_u (and all other ranks fixed),
//   E_{y_v}[alpha_u + alpha_v] >= min_theta {G(theta) + min{1-g(theta), g(y_u)}}.
// This is the weaker of the two per-edge floors; the tail bound above
// strengthens it, so instances passing the tail bound must pass this too.
inline gain_bound_report check_minmax_gain_bound(const instance& inst, vertex_id u, vertex_id v,
                                                 std::vector<double> ranks,
                                                 const ranking_gain& gain = ranking_gain::standard(),
                                                 double tol = 1e-9) {
    detail::require_ordered_edge(inst, u, v, "check_minmax_gain_bound");
    gain_bound_report rep;
    const vertex_id skip[] = {u, v};
    const auto brk = detail::rank_breakpoints(inst, ranks, skip);
    for (std::size_t i = 1; i < brk.size(); ++i) {
        if (!(brk[i] > brk[i - 1])) continue;
        gain_bound_sample s;
        s.y_u = 0.5 * (brk[i - 1] + brk[i]);
        ranks[u] = s.y_u;
        s.lhs = detail::integrate_v_gain(inst, u, v, ranks, gain, std::nullopt);
        s.rhs = single_threshold_floor(gain, gain.g(s.y_u));
        rep.min_margin = std::min(rep.min_margin, s.lhs - s.rhs);
        rep.samples.push_back(s);
    }
    rep.pass = rep.samples.empty() || rep.min_margin >= -tol;
    return rep;
}

// ---------------------------------------------------------------------------
// The three-threshold functional
// ---------------------------------------------------------------------------

struct functional_min_report {
    double min_value = std::numeric_limits<double>::infinity();
    double tau = 0.0, gamma = 0.0, theta = 0.0;  // the minimizing triple
    int grid = 0;
};

namespace detail {

// Closed form of the capped tail integral of the gain over [tau, 1]:
//   int_tau^1 min{g(y), cap} dy.
// g crosses `cap` at y* = 1 - c/cap on the hyperbolic piece (never, if cap
// clears the plateau; immediately, if cap <= g(0)); clamp y* to [tau, 1] and
// split the integral there.
inline double capped_tail_gain(const ranking_gain& gain, double tau, double cap) {
    double ystar;
    if (cap >= gain.plateau)
        ystar = 1.0;
    else if (cap <= gain.c)
        ystar = 0.0;
    else
        ystar = std::min(1.0 - gain.c / cap, gain.plateau_start);
    ystar = std::clamp(ystar, tau, 1.0);
    return gain.G(ystar) - gain.G(tau) + cap * (1.0 - ystar);
}

}  // namespace detail

// Minimum over tau in [0,1] and 0 <= gamma <= theta <= 1 of
//   B(tau, gamma, theta) = G(tau) + G(gamma)
//                        + (1-tau) * (1 - gamma - (1-theta) g(theta))
//                        + gamma * int_tau^1 min{g(y), 1-g(theta)} dy.
// Every expected edge gain is at least this functional at the edge's own
// thresholds, so its minimum is the certified competitive ratio; for the
// standard gain it equals the omega constant.
inline functional_min_report gain_bound_functional_min(
    const ranking_gain& gain = ranking_gain::standard(), int grid = 160) {
    if (grid < 2) throw domain_error("gain_bound_functional_min: grid must be at least 2");
    functional_min_report rep;
    rep.grid = grid;
    std::vector<double> pts(static_cast<std::size_t>(grid) + 1);
    std::vector<double> Gp(pts.size()), gp(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        pts[i] = static_cast<double>(i) / grid;
        Gp[i] = gain.G(pts[i]);
        gp[i] = gain.g(pts[i]);
    }
    for (std::size_t it = 0; it < pts.size(); ++it) {  // theta
        const double theta = pts[it];
        const double gt = gp[it];
        const double cap = 1.0 - gt;
        for (std::size_t iu = 0; iu < pts.size(); ++iu) {  // tau
            const double tau = pts[iu];
            const double tail = detail::capped_tail_gain(gain, tau, cap);
            const double base = Gp[iu] + (1.0 - tau) * (1.0 - (1.0 - theta) * gt);
            for (std::size_t ig = 0; ig <= it; ++ig) {  // gamma <= theta
                const double gamma = pts[ig];
                const double val = base + Gp[ig] + gamma * (tail - (1.0 - tau));
                if (val < rep.min_value) {
                    rep.min_value = val;
                    rep.tau = tau;
                    rep.gamma = gamma;
                    rep.theta = theta;
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Deletion monotonicity
// ---------------------------------------------------------------------------

struct monotonicity_report {
    vertex_id removed = -1;
    int neighbors_checked = 0;
    std::vector<vertex_id> improved;  // neighbors that got strictly better (violations)
    bool pass = true;
};

// Deleting a vertex never improves any of its neighbors, under the order
// passive > active > unmatched, refined by: a passive vertex prefers a
// partner with an earlier deadline; an active vertex prefers a partner with
// a smaller rank.  Equal outcomes are fine.  Bipartitioned instances only;
// the claim is false on odd cycles.
inline monotonicity_report check_rank_monotonicity(const instance& inst,
                                                   const std::vector<double>& ranks,
                                                   vertex_id u,
                                                   const ranking_gain& gain = ranking_gain::standard()) {
    if (!inst.bipartite())
        throw not_bipartite("check_rank_monotonicity requires a bipartitioned instance");
    if (u < 0 || u >= inst.n)
        throw domain_error("check_rank_monotonicity: vertex out of range");
    const auto before = run_ranking(inst, ranks, gain);
    std::vector<std::uint8_t> mask(static_cast<std::size_t>(inst.n), 0);
    mask[static_cast<std::size_t>(u)] = 1;
    const auto after = run_ranking(inst, ranks, gain, mask);

    monotonicity_report rep;
    rep.removed = u;
    auto klass = [](match_role r) {
        return r == match_role::passive ? 2 : r == match_role::active ? 1 : 0;
    };
    for (vertex_id w : inst.neighbors(u)) {
        ++rep.neighbors_checked;
        const int kb = klass(before.role[w]);
        const int ka = klass(after.role[w]);
        bool better = ka > kb;
        if (ka == kb && before.role[w] == match_role::passive)
            better = after.partner_deadline_step[w] < before.partner_deadline_step[w];
        if (ka == kb && before.role[w] == match_role::active)
            better = after.partner_rank[w] < before.partner_rank[w];
        if (better) rep.improved.push_back(w);
    }
    rep.pass = rep.improved.empty();
    return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo competitive ratio
// ---------------------------------------------------------------------------

struct trial_row {
    std::int64_t trial = 0;
    std::uint64_t seed = 0;
    std::int64_t matched = 0;
    std::int64_t opt = 0;
    double ratio = 0.0;
};

struct ratio_estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t opt = 0;  // optimal number of matched pairs
    std::vector<trial_row> rows;
};

// Sample mean and standard error of |matching| / OPT over independent rank
// draws; trial t uses the derived seed derive_seed(seed, t), so results do
// not depend on scheduling and any single trial can be replayed.  The exact
// integral optimum is computed, which restricts this to bipartitioned
// instances.
inline ratio_estimate estimate_ratio(const instance& inst, std::int64_t trials,
                                     std::uint64_t seed,
                                     const ranking_gain& gain = ranking_gain::standard()) {
    if (trials <= 0) throw domain_error("estimate_ratio: trials must be positive");
    if (!inst.bipartite())
        throw not_bipartite("estimate_ratio computes the exact optimum and requires a bipartition");
    const auto o = opt_bipartite(inst);
    if (o.half_units == 0) throw zero_opt("estimate_ratio: the instance has optimum 0");
    const std::int64_t opt_pairs = o.half_units / 2;

    ratio_estimate est;
    est.opt = opt_pairs;
    est.rows.reserve(static_cast<std::size_t>(trials));
    neumaier_sum sum, sumsq;
    for (std::int64_t t = 0; t < trials; ++t) {
        const std::uint64_t ts = derive_seed(seed, static_cast<std::uint64_t>(t));
        std::mt19937_64 eng = make_engine(ts);
        const auto ranks = draw_distinct_ranks(static_cast<std::size_t>(inst.n), eng);
        const auto out = run_ranking(inst, ranks, gain);
        const auto matched = out.matched_pairs();
        const double r = static_cast<double>(matched) / static_cast<double>(opt_pairs);
        est.rows.push_back({t, ts, matched, opt_pairs, r});
        sum.add(r);
        sumsq.add(r * r);
    }
    const double n = static_cast<double>(trials);
    est.mean = sum.value() / n;
    if (trials > 1) {
        const double var = std::max(0.0, (sumsq.value() - n * est.mean * est.mean) / (n - 1.0));
        est.stderr_ = std::sqrt(var / n);
    }
    return est;
}

}  // namespace fomatch
