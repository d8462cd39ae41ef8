#pragma once

// Command-line front end.  Grammar:
//   fomatch <command> [--k N] [--m N] [--L N] [--n N] [--p X] [--trials N]
//           [--seed N] [--family wf-hard|rank-hard|wf-hard-general|random]
//           [--in PATH] [--out PATH] [--format csv|json] [--only CHECK]
//           [--tol X] [--u ID] [--v ID]
// Commands: gen, waterfill, stationary, ranking, thresholds, verify,
// constants, report.  Exit codes: 0 pass, 1 check failure, 2 usage error,
// 3 IO error.  --seed falls back to the FOM_SEED environment variable, then
// to 42; every artifact embeds {command, seed, version, wallclock}.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fomatch/constants.hpp"
#include "fomatch/errors.hpp"
#include "fomatch/gain.hpp"
#include "fomatch/instance.hpp"
#include "fomatch/io.hpp"
#include "fomatch/opt.hpp"
#include "fomatch/random_instances.hpp"
#include "fomatch/ranking.hpp"
#include "fomatch/ranking_hardness.hpp"
#include "fomatch/report.hpp"
#include "fomatch/special_functions.hpp"
#include "fomatch/version.hpp"
#include "fomatch/waterfill.hpp"
#include "fomatch/wf_hardness.hpp"

namespace fomatch {

struct cli_config {
    int k = 4, m = 2, n = 8;
    long long L = 2;
    double p = 0.5;
    std::int64_t trials = 1000;
    std::uint64_t seed = 42;
    std::string family, in_path, out_path, only;
    std::string format = "csv";
    double tol = -1.0;  // <0: per-check defaults
    int u = -1, v = -1;
    std::string command_line;  // reconstructed for metadata
};

namespace cli_detail {

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw io_error("read failure on '" + path + "'");
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw io_error("write failure on '" + path + "'");
}

inline run_metadata make_metadata(const cli_config& cfg) {
    return run_metadata{cfg.command_line, cfg.seed, FOMATCH_VERSION, now_utc_string()};
}

// Instance from --in (file) or --family (generator); exactly one required.
inline instance make_instance(const cli_config& cfg) {
    if (!cfg.in_path.empty()) return load_instance(read_text_file(cfg.in_path));
    if (cfg.family == "wf-hard") return gen_wf_hard_instance(cfg.k, cfg.m);
    if (cfg.family == "rank-hard") return gen_ranking_hard_instance(cfg.k, cfg.m);
    if (cfg.family == "wf-hard-general")
        return gen_generalized_hard_instance(cfg.k, cfg.m, cfg.L).inst;
    if (cfg.family == "random")
        return gen_random_instance(cfg.n, cfg.p, /*bipartite=*/true, cfg.seed);
    throw domain_error(cfg.family.empty()
                           ? "an instance is required: pass --in PATH or --family NAME"
                           : "unknown family '" + cfg.family + "'");
}

inline double instance_opt(const instance& inst) {
    return inst.bipartite() ? opt_bipartite(inst).value() : opt_fractional_general(inst).value();
}

// Artifact to --out (file) or stdout.  The human summary rides on stdout when
// the artifact went to a file, and on stderr when the artifact owns stdout,
// so piped output always stays machine-parseable.
inline void emit(const cli_config& cfg, const std::string& text, std::ostream& out,
                 std::ostream& err, const std::string& summary) {
    if (!cfg.out_path.empty()) {
        write_text_file(cfg.out_path, text);
        if (!summary.empty()) out << summary;
        out << "wrote " << cfg.out_path << "\n";
    } else {
        if (!summary.empty()) err << summary;
        out << text;
    }
}

// ---------------------------------------------------------------------------
// verify: the check suite
// ---------------------------------------------------------------------------

inline double tol_or(const cli_config& cfg, double dflt) {
    return cfg.tol >= 0.0 ? cfg.tol : dflt;
}

inline void checks_omega(const cli_config& cfg, std::vector<check_result>& out) {
    const double om = omega_constant();
    const double fp = omega_fixed_point();
    const double c = rank_gain_constant();
    const double ident = c - c * std::log(c / (1.0 - c));
    const double g1 = ranking_gain::standard().G(1.0);
    auto row = [&](const char* name, double residual, double tol, std::string note) {
        out.push_back({name, residual, tol, residual <= tol, std::move(note)});
    };
    row("omega:defining-equation", std::abs(om * std::exp(om) - 1.0), tol_or(cfg, 1e-13),
        "omega=" + fmt_full(om));
    row("omega:fixed-point-agreement", std::abs(fp - om), tol_or(cfg, 1e-12),
        "fixed_point=" + fmt_full(fp));
    row("omega:gain-constant-identity", std::abs(ident - om), tol_or(cfg, 1e-12),
        "c=" + fmt_full(c));
    row("omega:rank-gain-total", std::abs(g1 - om), tol_or(cfg, 1e-12), "G(1)=" + fmt_full(g1));
}

inline void checks_spot(const cli_config& cfg, std::vector<check_result>& out) {
    const special_functions sf;
    const double cc = sf.c();
    const auto lg = linear_gain();
    const double target_G1 = 1.0 - std::sqrt(2.0) / 4.0;
    struct row {
        const char* name;
        double residual, tol;
    } rows[] = {
        {"spot:f-at-0", std::abs(sf.f(0.0) - 1.0), tol_or(cfg, 1e-12)},
        {"spot:f-at-c", std::abs(sf.f(cc) - 0.0), tol_or(cfg, 1e-12)},
        {"spot:h-at-0", std::abs(sf.h(0.0) - 1.0), tol_or(cfg, 1e-10)},
        {"spot:h-at-1", std::abs(sf.h(1.0) - 0.0), tol_or(cfg, 1e-10)},
        {"spot:linear-gain-total", std::abs(lg.G(1.0) - target_G1), tol_or(cfg, 1e-12)},
    };
    for (const auto& r : rows)
        out.push_back({r.name, r.residual, r.tol, r.residual <= r.tol, ""});
}

inline void checks_integrals(const cli_config& cfg, std::vector<check_result>& out) {
    const special_functions sf;
    const auto rep = verify_tau_integrals(sf, 200, tol_or(cfg, 1e-6));
    out.push_back({"integrals:" + rep.cumulative.identity, rep.cumulative.max_residual,
                   rep.cumulative.tol, rep.cumulative.pass, ""});
    out.push_back({"integrals:" + rep.total_mass.identity, rep.total_mass.max_residual,
                   rep.total_mass.tol, rep.total_mass.pass, ""});
    out.push_back({"integrals:" + rep.unit_bound.identity, rep.unit_bound.value,
                   rep.unit_bound.tol, rep.unit_bound.pass,
                   "value=" + fmt_full(rep.unit_bound.value) + " (must stay below 1)"});
}

inline void checks_f_ode(const cli_config& cfg, std::vector<check_result>& out) {
    const special_functions sf;
    const auto rep = verify_f_ode(sf, 10000, tol_or(cfg, 1e-8));
    out.push_back({"f-ode:" + rep.identity, rep.max_residual, rep.tol, rep.pass,
                   "grid=" + std::to_string(rep.grid)});
}

inline void checks_wf_cert(const cli_config& cfg, std::vector<check_result>& out) {
    const auto gain = linear_gain();
    const double floor = water_ratio();
    double worst_edge = -1e300, worst_gap = 0.0;
    bool all_pass = true;
    long long instances = 0;
    auto feed = [&](const instance& inst) {
        const auto o = run_waterfill(inst, gain);
        const auto cert = certify_duals(o, inst, floor, 1e-9);
        worst_edge = std::max(worst_edge, floor - cert.min_edge_sum);
        worst_gap = std::max(worst_gap, cert.objective_gap);
        all_pass = all_pass && cert.pass;
        ++instances;
    };
    for (int i = 0; i < 200; ++i) {
        std::mt19937_64 eng = make_engine(derive_seed(cfg.seed, 1000 + i));
        const int n = 2 + static_cast<int>(eng() % 11);  // 2..12
        const double p = 0.25 + 0.5 * uniform01(eng);
        feed(gen_random_instance(n, p, (i % 2) == 0, derive_seed(cfg.seed, i)));
    }
    feed(gen_wf_hard_instance(30, 30));
    const double tol = tol_or(cfg, 1e-9);
    out.push_back({"wf-cert:edge-floor", worst_edge, tol, all_pass && worst_edge <= tol,
                   std::to_string(instances) + " instances, floor=" + fmt_full(floor)});
    out.push_back({"wf-cert:objective-match", worst_gap, tol, worst_gap <= tol, ""});
}

inline void checks_monotonicity(const cli_config& cfg, std::vector<check_result>& out) {
    long long cases = 0, violations = 0;
    const long long budget = 20000;
    for (std::uint64_t i = 0; cases < budget; ++i) {
        std::mt19937_64 eng = make_engine(derive_seed(cfg.seed, 5000 + i));
        const int n = 2 + static_cast<int>(eng() % 7);  // 2..8
        const double p = 0.3 + 0.5 * uniform01(eng);
        const auto inst = gen_random_instance(n, p, true, derive_seed(cfg.seed, 7000 + i));
        const auto ranks = draw_distinct_ranks(static_cast<std::size_t>(inst.n), eng);
        for (vertex_id u = 0; u < inst.n && cases < budget; ++u) {
            ++cases;
            if (!check_rank_monotonicity(inst, ranks, u).pass) ++violations;
        }
    }
    out.push_back({"monotonicity:no-neighbor-improves", static_cast<double>(violations),
                   0.0, violations == 0, std::to_string(cases) + " cases"});
}

// Edges of a small random sweep, oriented so the first endpoint expires first.
template <typename Fn>
inline long long for_ordered_edges(const cli_config& cfg, int instances, std::uint64_t salt,
                                   Fn&& fn) {
    long long edges = 0;
    for (int i = 0; i < instances; ++i) {
        std::mt19937_64 eng = make_engine(derive_seed(cfg.seed, salt + i));
        const int n = 3 + static_cast<int>(eng() % 6);  // 3..8
        const double p = 0.35 + 0.4 * uniform01(eng);
        const auto inst = gen_random_instance(n, p, true, derive_seed(cfg.seed, salt + 100 + i));
        const auto ranks = draw_distinct_ranks(static_cast<std::size_t>(inst.n), eng);
        for (const auto& [a, b] : inst.edges) {
            vertex_id u = a, v = b;
            if (inst.deadline_step[u] > inst.deadline_step[v]) std::swap(u, v);
            fn(inst, u, v, ranks);
            ++edges;
        }
    }
    return edges;
}

inline void checks_threshold_id(const cli_config& cfg, std::vector<check_result>& out) {
    double worst = 0.0;
    long long gamma_violations = 0;
    const long long edges = for_ordered_edges(
        cfg, 30, 9000,
        [&](const instance& inst, vertex_id u, vertex_id v, const std::vector<double>& ranks) {
            const auto rep = check_threshold_gain_identity(inst, u, v, ranks);
            worst = std::max(worst, rep.residual);
            if (!thresholds(inst, u, v, ranks).gamma_bound_pass) ++gamma_violations;
        });
    const double tol = tol_or(cfg, 1e-9);
    out.push_back({"threshold-id:split-gain-identity", worst, tol, worst <= tol,
                   std::to_string(edges) + " edges"});
    out.push_back({"threshold-id:theta-ge-gamma", static_cast<double>(gamma_violations), 0.0,
                   gamma_violations == 0, ""});
}

inline void checks_tail_bound(const cli_config& cfg, std::vector<check_result>& out) {
    double min_margin = 1e300;
    const long long edges = for_ordered_edges(
        cfg, 30, 11000,
        [&](const instance& inst, vertex_id u, vertex_id v, const std::vector<double>& ranks) {
            const auto rep = check_tail_gain_bound(inst, u, v, ranks);
            if (!rep.samples.empty()) min_margin = std::min(min_margin, rep.min_margin);
        });
    const double tol = tol_or(cfg, 1e-9);
    const double residual = min_margin == 1e300 ? 0.0 : -min_margin;
    out.push_back({"tail-bound:expected-gain-floor", residual, tol, residual <= tol,
                   std::to_string(edges) + " edges, worst margin " +
                       fmt_full(min_margin == 1e300 ? 0.0 : min_margin)});
}

inline void checks_minmax_bound(const cli_config& cfg, std::vector<check_result>& out) {
    double min_margin = 1e300;
    const long long edges = for_ordered_edges(
        cfg, 30, 13000,
        [&](const instance& inst, vertex_id u, vertex_id v, const std::vector<double>& ranks) {
            const auto rep = check_minmax_gain_bound(inst, u, v, ranks);
            if (!rep.samples.empty()) min_margin = std::min(min_margin, rep.min_margin);
        });
    const double tol = tol_or(cfg, 1e-9);
    const double residual = min_margin == 1e300 ? 0.0 : -min_margin;
    out.push_back({"minmax-bound:single-threshold-floor", residual, tol, residual <= tol,
                   std::to_string(edges) + " edges"});
}

inline void checks_functional_min(const cli_config& cfg, std::vector<check_result>& out) {
    const auto rep = gain_bound_functional_min(ranking_gain::standard(), 160);
    const double om = omega_constant();
    out.push_back({"functional-min:equals-omega", std::abs(rep.min_value - om),
                   tol_or(cfg, 5e-3), std::abs(rep.min_value - om) <= tol_or(cfg, 5e-3),
                   "min=" + fmt_full(rep.min_value) + " at tau=" + fmt_stat(rep.tau) +
                       " gamma=" + fmt_stat(rep.gamma) + " theta=" + fmt_stat(rep.theta)});
}

}  // namespace cli_detail

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace cli_detail {

inline int cmd_gen(const cli_config& cfg, std::ostream& out, std::ostream& err) {
    const instance inst = make_instance(cfg);
    const double opt = instance_opt(inst);
    std::string text = metadata_comment(make_metadata(cfg));
    text += "# vertices: " + std::to_string(inst.n) + "\n";
    text += "# edges: " + std::to_string(inst.edges.size()) + "\n";
    text += "# opt: " + fmt_stat(opt) + "\n";
    text += serialize_instance(inst);
    const std::string summary = "vertices " + std::to_string(inst.n) + ", edges " +
                                std::to_string(inst.edges.size()) + ", opt " + fmt_stat(opt) +
                                "\n";
    emit(cfg, text, out, err, summary);
    return 0;
}

inline int cmd_waterfill(const cli_config& cfg, std::ostream& out, std::ostream& err) {
    const instance inst = make_instance(cfg);
    const auto gain = linear_gain();
    const auto o = run_waterfill(inst, gain);
    const auto cert = certify_duals(o, inst, water_ratio(), 1e-9);
    const double opt = instance_opt(inst);
    const double achieved = opt > 0.0 ? achieved_ratio(o, inst) : 1.0;
    std::ostringstream sum;
    sum << "vertices " << inst.n << ", edges " << inst.edges.size() << "\n"
        << "matched mass " << fmt_stat(o.total) << ", opt " << fmt_stat(opt) << ", ratio "
        << fmt_stat(achieved) << "\n"
        << "certificate: min edge dual sum " << fmt_full(cert.min_edge_sum) << " vs floor "
        << fmt_full(cert.ratio) << ", objective gap " << fmt_full(cert.objective_gap) << " -> "
        << (cert.pass ? "PASS" : "FAIL") << "\n";
    const auto md = make_metadata(cfg);
    const std::string artifact =
        cfg.format == "json" ? cert_json(cert, md) : outcome_csv(o, inst, md);
    emit(cfg, artifact, out, err, sum.str());
    return cert.pass ? 0 : 1;
}

inline int cmd_stationary(const cli_config& cfg, std::ostream& out, std::ostream& err) {
    const auto prof = stationary_profile(cfg.k);
    const double target = water_ratio();
    std::ostringstream sum;
    sum << "k " << prof.k << ": ratio " << fmt_full(prof.ratio_k) << ", target "
        << fmt_full(target) << ", gap " << fmt_stat(prof.ratio_k - target) << "\n"
        << "fixed point: " << prof.iterations << " iterations, max row sum "
        << fmt_stat(prof.max_row_sum) << ", max deviation vs tau "
        << fmt_stat(prof.max_dev_vs_tau) << "\n";
    const auto md = make_metadata(cfg);
    std::string artifact;
    if (cfg.format == "json") {
        nlohmann::json j;
        j["metadata"] = metadata_json(md);
        j["k"] = prof.k;
        j["ratio_k"] = prof.ratio_k;
        j["iterations"] = prof.iterations;
        j["max_row_sum"] = prof.max_row_sum;
        j["max_dev_vs_tau"] = prof.max_dev_vs_tau;
        j["a"] = prof.a;
        j["p_star"] = prof.p_star;
        artifact = j.dump(2) + "\n";
    } else {
        artifact = metadata_comment(md);
        artifact += "j,a,p\n";
        for (std::size_t j = 0; j < prof.p_star.size(); ++j)
            artifact += std::to_string(j + 1) + "," + fmt_full(prof.a[j]) + "," +
                        fmt_full(prof.p_star[j]) + "\n";
    }
    emit(cfg, artifact, out, err, sum.str());
    return 0;
}

inline int cmd_ranking(const cli_config& cfg, std::ostream& out, std::ostream& err) {
    const auto md = make_metadata(cfg);
    std::ostringstream sum;
    std::string artifact;
    if (cfg.in_path.empty() && cfg.family == "rank-hard") {
        const auto rep = hard_instance_ratio(cfg.k, cfg.m, cfg.trials, cfg.seed);
        sum << "k " << cfg.k << ", m " << cfg.m << ", trials " << cfg.trials << ", opt "
            << (1LL * cfg.k * cfg.m) << "\n"
            << "mean ratio " << fmt_stat(rep.mean) << " (stderr " << fmt_stat(rep.stderr_)
            << ")\n"
            << "bulk groups [" << rep.bulk_first << "," << rep.bulk_last << "): mean "
            << fmt_stat(rep.bulk_mean) << " (stderr " << fmt_stat(rep.bulk_stderr_)
            << "), omega " << fmt_stat(omega_constant()) << ", gap "
            << fmt_stat(rep.bulk_mean - omega_constant()) << "\n"
            << "avg unmatched: u " << fmt_stat(rep.avg_unmatched_u) << ", v "
            << fmt_stat(rep.avg_unmatched_v) << "\n";
        artifact = trials_csv(rep.rows, md);
    } else {
        const instance inst = make_instance(cfg);
        const auto rep = estimate_ratio(inst, cfg.trials, cfg.seed);
        sum << "vertices " << inst.n << ", trials " << cfg.trials << ", opt " << rep.opt << "\n"
            << "mean ratio " << fmt_stat(rep.mean) << " (stderr " << fmt_stat(rep.stderr_)
            << ")\n";
        artifact = trials_csv(rep.rows, md);
    }
    emit(cfg, artifact, out, err, sum.str());
    return 0;
}

inline int cmd_thresholds(const cli_config& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.u < 0 || cfg.v < 0)
        throw domain_error("thresholds needs --u and --v (an edge, earlier deadline first)");
    const instance inst = make_instance(cfg);
    std::mt19937_64 eng = make_engine(cfg.seed);
    const auto ranks = draw_distinct_ranks(static_cast<std::size_t>(inst.n), eng);
    const auto rep = thresholds(inst, cfg.u, cfg.v, ranks, /*throw_on_violation=*/false);
    std::ostringstream sum;
    sum << "edge (" << cfg.u << "," << cfg.v << "): tau " << fmt_full(rep.tau) << ", gamma "
        << fmt_full(rep.gamma) << ", theta " << fmt_full(rep.theta) << " over "
        << rep.theta_samples.size() << " samples, constancy "
        << (rep.constancy_pass ? "PASS" : "FAIL") << "\n";
    const std::string artifact = threshold_json(rep, make_metadata(cfg));
    emit(cfg, artifact, out, err, sum.str());
    return rep.constancy_pass && rep.gamma_bound_pass ? 0 : 1;
}

inline int cmd_verify(const cli_config& cfg, std::ostream& out) {
    static const char* all_checks[] = {"omega",        "spot",         "integrals",
                                       "f-ode",        "wf-cert",      "monotonicity",
                                       "threshold-id", "tail-bound",   "functional-min",
                                       "minmax-bound"};
    std::vector<std::string> selected;
    if (cfg.only.empty())
        selected.assign(std::begin(all_checks), std::end(all_checks));
    else
        selected.push_back(cfg.only);

    std::vector<check_result> results;
    for (const auto& name : selected) {
        if (name == "omega") checks_omega(cfg, results);
        else if (name == "spot") checks_spot(cfg, results);
        else if (name == "integrals") checks_integrals(cfg, results);
        else if (name == "f-ode") checks_f_ode(cfg, results);
        else if (name == "wf-cert") checks_wf_cert(cfg, results);
        else if (name == "monotonicity") checks_monotonicity(cfg, results);
        else if (name == "threshold-id") checks_threshold_id(cfg, results);
        else if (name == "tail-bound") checks_tail_bound(cfg, results);
        else if (name == "minmax-bound") checks_minmax_bound(cfg, results);
        else if (name == "functional-min") checks_functional_min(cfg, results);
        else
            throw CLI::ValidationError("--only", "unknown check '" + name + "'");
    }
    bool all_pass = true;
    for (const auto& r : results) {
        out << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  residual " << fmt_stat(r.residual)
            << "  tol " << fmt_stat(r.tol);
        if (!r.note.empty()) out << "  (" << r.note << ")";
        out << "\n";
        all_pass = all_pass && r.pass;
    }
    out << (all_pass ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
    if (!cfg.out_path.empty()) {
        write_text_file(cfg.out_path, checks_json(results, make_metadata(cfg)));
        out << "wrote " << cfg.out_path << "\n";
    }
    return all_pass ? 0 : 1;
}

inline int cmd_constants(const cli_config& cfg, std::ostream& out, std::ostream& err) {
    const special_functions sf;
    const auto rg = ranking_gain::standard();
    const auto lg = linear_gain();
    const std::pair<const char*, double> rows[] = {
        {"water_ratio", water_ratio()},
        {"omega", omega_constant()},
        {"omega_fixed_point", omega_fixed_point()},
        {"rank_gain_c", rg.c},
        {"rank_gain_plateau_start", rg.plateau_start},
        {"rank_gain_plateau", rg.plateau},
        {"rank_gain_total", rg.G(1.0)},
        {"linear_gain_total", lg.G(1.0)},
        {"f_at_0", sf.f(0.0)},
        {"f_at_c", sf.f(sf.c())},
        {"h_at_0", sf.h(0.0)},
        {"h_at_1", sf.h(1.0)},
    };
    if (cfg.format == "json") {
        nlohmann::json j;
        j["metadata"] = metadata_json(make_metadata(cfg));
        for (const auto& [name, value] : rows) j[name] = value;
        const std::string text = j.dump(2) + "\n";
        emit(cfg, text, out, err, "");
    } else {
        std::string text;
        for (const auto& [name, value] : rows)
            text += std::string(name) + " = " + fmt_full(value) + "\n";
        emit(cfg, text, out, err, "");
    }
    return 0;
}

inline int cmd_report(const cli_config& cfg, std::ostream& out, std::ostream& err) {
    const bool want_all = cfg.family.empty();
    if (!want_all && cfg.family != "wf-hard" && cfg.family != "rank-hard" &&
        cfg.family != "stationary")
        throw domain_error("report families are wf-hard, rank-hard, stationary");
    std::vector<report_row> rows;
    const double wf_target = water_ratio();
    const double rk_target = omega_constant();
    if (want_all || cfg.family == "wf-hard") {
        for (int k : {10, 50, 200}) {
            err << "wf-hard k=" << k << " m=200...\n";
            const auto rep = ratio_on_hard_instance(k, 200, linear_gain());
            rows.push_back({"wf-hard", k, 200, 1, cfg.seed, rep.ratio, 0.0, wf_target,
                            rep.ratio - wf_target});
        }
    }
    if (want_all || cfg.family == "rank-hard") {
        const std::int64_t trials = cfg.trials;
        for (int k : {10, 50, 100}) {
            err << "rank-hard k=" << k << " m=50 trials=" << trials << "...\n";
            const auto rep = hard_instance_ratio(k, 50, trials, cfg.seed);
            rows.push_back({"rank-hard", k, 50, trials, cfg.seed, rep.bulk_mean,
                            rep.bulk_stderr_, rk_target, rep.bulk_mean - rk_target});
        }
    }
    if (want_all || cfg.family == "stationary") {
        for (int k : {10, 100, 1000}) {
            err << "stationary k=" << k << "...\n";
            const auto prof = stationary_profile(k);
            rows.push_back({"stationary", k, 0, 1, cfg.seed, prof.ratio_k, 0.0, wf_target,
                            prof.ratio_k - wf_target});
        }
    }
    emit(cfg, report_csv(rows, make_metadata(cfg)), out, err, "");
    return 0;
}

}  // namespace cli_detail

// ---------------------------------------------------------------------------
// Parsing and dispatch
// ---------------------------------------------------------------------------

inline int cli_run(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    cli_config cfg;
    cfg.command_line = "fomatch";
    for (const auto& a : args) cfg.command_line += " " + a;

    CLI::App app{"fully online matching laboratory"};
    app.require_subcommand(1);
    bool seed_given = false;

    auto add_common = [&](CLI::App* sub, bool with_sizes, bool with_instance) {
        sub->add_option("--seed", cfg.seed, "seed (fallback: FOM_SEED env, then 42)")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--out", cfg.out_path, "output path (default: stdout)");
        sub->add_option("--format", cfg.format, "artifact format")
            ->check(CLI::IsMember({"csv", "json"}));
        if (with_sizes) {
            sub->add_option("--k", cfg.k, "group half-size");
            sub->add_option("--m", cfg.m, "group count");
            sub->add_option("--L", cfg.L, "copies per layer (wf-hard-general)");
            sub->add_option("--n", cfg.n, "vertex count (random family)");
            sub->add_option("--p", cfg.p, "edge probability (random family)")
                ->check(CLI::Range(0.0, 1.0));
        }
        if (with_instance) {
            sub->add_option("--in", cfg.in_path, "instance file");
            sub->add_option("--family", cfg.family, "generator family")
                ->check(CLI::IsMember({"wf-hard", "rank-hard", "wf-hard-general", "random"}));
        }
    };

    auto* gen = app.add_subcommand("gen", "generate an instance file");
    add_common(gen, true, false);
    gen->add_option("--family", cfg.family, "generator family")
        ->required()
        ->check(CLI::IsMember({"wf-hard", "rank-hard", "wf-hard-general", "random"}));

    auto* wf = app.add_subcommand("waterfill", "run water-filling and certify the duals");
    add_common(wf, true, true);

    auto* st = app.add_subcommand("stationary", "hard-instance level dynamics fixed point");
    add_common(st, false, false);
    st->add_option("--k", cfg.k, "profile resolution");

    auto* rk = app.add_subcommand("ranking", "Monte Carlo matched fraction of rank-order matching");
    add_common(rk, true, true);
    rk->add_option("--trials", cfg.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);

    auto* th = app.add_subcommand("thresholds", "marginal-rank thresholds of one edge");
    add_common(th, true, true);
    th->add_option("--u", cfg.u, "earlier-deadline endpoint");
    th->add_option("--v", cfg.v, "later-deadline endpoint");

    auto* vf = app.add_subcommand("verify", "run the numerical check suite");
    add_common(vf, false, false);
    vf->add_option("--only", cfg.only,
                   "single check: omega|spot|integrals|f-ode|wf-cert|monotonicity|"
                   "threshold-id|tail-bound|functional-min|minmax-bound");
    vf->add_option("--tol", cfg.tol, "override the default tolerance of the selected checks");

    auto* ct = app.add_subcommand("constants", "print every derived constant");
    add_common(ct, false, false);

    auto* rp = app.add_subcommand("report", "ratio-vs-size convergence tables");
    add_common(rp, false, false);
    rp->add_option("--family", cfg.family, "restrict to one table")
        ->check(CLI::IsMember({"wf-hard", "rank-hard", "stationary"}));
    rp->add_option("--trials", cfg.trials, "trials per rank-hard row")->check(CLI::PositiveNumber);

    std::vector<const char*> argv;
    argv.push_back("fomatch");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }

    if (!seed_given) {
        if (const char* env = std::getenv("FOM_SEED")) {
            try {
                cfg.seed = std::stoull(env);
            } catch (const std::exception&) {
                err << "FOM_SEED is set but not a valid unsigned integer: '" << env << "'\n";
                return 2;
            }
        }
    }

    try {
        using namespace cli_detail;
        if (app.got_subcommand(gen)) return cmd_gen(cfg, out, err);
        if (app.got_subcommand(wf)) return cmd_waterfill(cfg, out, err);
        if (app.got_subcommand(st)) {
            if (st->count("--k") == 0) cfg.k = 100;  // profile resolution default
            return cmd_stationary(cfg, out, err);
        }
        if (app.got_subcommand(rk)) return cmd_ranking(cfg, out, err);
        if (app.got_subcommand(th)) return cmd_thresholds(cfg, out, err);
        if (app.got_subcommand(vf)) return cmd_verify(cfg, out);
        if (app.got_subcommand(ct)) return cmd_constants(cfg, out, err);
        if (app.got_subcommand(rp)) return cmd_report(cfg, out, err);
        err << "no subcommand selected\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    } catch (const io_error& e) {
        err << "io error: " << e.what() << "\n";
        return 3;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const quadrature_failure& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const non_contraction& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const constancy_violation& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const mismatched_outcome& e) {
        err << "check failure: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}

inline int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_run(args);
}

}  // namespace fomatch
