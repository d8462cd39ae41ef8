#pragma once

// Artifact writers.  Every emitted file embeds {command, seed, version,
// wallclock}: as '#' comment lines in CSV (and in instance files, whose
// loader skips comments), or as a "metadata" object in JSON.  Apart from the
// wallclock stamp, identical configurations produce byte-identical output.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <string>
#include <vector>

#include <json.hpp>

#include "fomatch/instance.hpp"
#include "fomatch/ranking.hpp"
#include "fomatch/version.hpp"
#include "fomatch/waterfill.hpp"

namespace fomatch {

struct run_metadata {
    std::string command;  // the CLI invocation or a library-level tag
    std::uint64_t seed = 0;
    std::string version = FOMATCH_VERSION;
    std::string wallclock;  // ISO-8601 UTC, empty allowed for library use
};

inline std::string now_utc_string() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Shortest representation that round-trips a double exactly.
inline std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Display precision for statistics columns.
inline std::string fmt_stat(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string metadata_comment(const run_metadata& md) {
    std::string out;
    out += "# command: " + md.command + "\n";
    out += "# seed: " + std::to_string(md.seed) + "\n";
    out += "# version: " + md.version + "\n";
    out += "# wallclock: " + md.wallclock + "\n";
    return out;
}

inline nlohmann::json metadata_json(const run_metadata& md) {
    return nlohmann::json{{"command", md.command},
                          {"seed", md.seed},
                          {"version", md.version},
                          {"wallclock", md.wallclock}};
}

// ---------------------------------------------------------------------------
// Water-filling artifacts
// ---------------------------------------------------------------------------

// Two sections: per-vertex levels and duals, then per-edge fractional mass.
inline std::string outcome_csv(const fractional_outcome& out, const instance& inst,
                               const run_metadata& md) {
    std::string s = metadata_comment(md);
    s += "vertex,x,p,alpha\n";
    for (vertex_id v = 0; v < inst.n; ++v)
        s += std::to_string(v) + "," + fmt_full(out.x[v]) + "," + fmt_full(out.p[v]) + "," +
             fmt_full(out.alpha[v]) + "\n";
    s += "edge,u,v,x_uv\n";
    for (std::size_t e = 0; e < inst.edges.size(); ++e)
        s += std::to_string(e) + "," + std::to_string(inst.edges[e].first) + "," +
             std::to_string(inst.edges[e].second) + "," + fmt_full(out.x_edge[e]) + "\n";
    return s;
}

inline std::string cert_json(const cert_report& rep, const run_metadata& md) {
    nlohmann::json j;
    j["metadata"] = metadata_json(md);
    j["min_edge_sum"] = rep.min_edge_sum;
    j["objective_gap"] = rep.objective_gap;
    j["ratio"] = rep.ratio;
    j["tol"] = rep.tol;
    j["pass"] = rep.pass;
    j["violations"] = nlohmann::json::array();
    for (const auto& v : rep.violations)
        j["violations"].push_back({{"u", v.u}, {"v", v.v}, {"sum", v.sum}});
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Ranking artifacts
// ---------------------------------------------------------------------------

inline std::string trials_csv(const std::vector<trial_row>& rows, const run_metadata& md) {
    std::string s = metadata_comment(md);
    s += "trial,seed,matched,opt,ratio\n";
    for (const auto& r : rows)
        s += std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
             std::to_string(r.matched) + "," + std::to_string(r.opt) + "," + fmt_stat(r.ratio) +
             "\n";
    return s;
}

inline std::string threshold_json(const threshold_report& rep, const run_metadata& md) {
    nlohmann::json j;
    j["metadata"] = metadata_json(md);
    j["u"] = rep.u;
    j["v"] = rep.v;
    j["tau"] = rep.tau;
    j["gamma"] = rep.gamma;
    j["theta_samples"] = nlohmann::json::array();
    for (const auto& s : rep.theta_samples)
        j["theta_samples"].push_back({{"y_u", s.y_u}, {"theta", s.theta}});
    j["constancy_pass"] = rep.constancy_pass;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Convergence tables and check suites
// ---------------------------------------------------------------------------

struct report_row {
    std::string family;
    std::int64_t k = 0, m = 0, trials = 0;
    std::uint64_t seed = 0;
    double ratio = 0.0, stderr_ = 0.0, target = 0.0, gap = 0.0;
};

inline std::string report_csv(const std::vector<report_row>& rows, const run_metadata& md) {
    std::string s = metadata_comment(md);
    s += "family,k,m,trials,seed,ratio,stderr,target,gap\n";
    for (const auto& r : rows)
        s += r.family + "," + std::to_string(r.k) + "," + std::to_string(r.m) + "," +
             std::to_string(r.trials) + "," + std::to_string(r.seed) + "," + fmt_stat(r.ratio) +
             "," + fmt_stat(r.stderr_) + "," + fmt_stat(r.target) + "," + fmt_stat(r.gap) + "\n";
    return s;
}

struct check_result {
    std::string name;
    double residual = 0.0;  // the quantity compared against tol (bound margin, |lhs-rhs|, ...)
    double tol = 0.0;
    bool pass = false;
    std::string note;  // extra values worth reporting (measured constants etc.)
};

inline std::string checks_json(const std::vector<check_result>& checks,
                               const run_metadata& md) {
    nlohmann::json j;
    j["metadata"] = metadata_json(md);
    bool all = true;
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        j["checks"].push_back({{"name", c.name},
                               {"residual", c.residual},
                               {"tol", c.tol},
                               {"pass", c.pass},
                               {"note", c.note}});
        all = all && c.pass;
    }
    j["pass"] = all;
    return j.dump(2) + "\n";
}

}  // namespace fomatch
