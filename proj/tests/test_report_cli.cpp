#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <fomatch/cli.hpp>

using namespace fomatch;
namespace fs = std::filesystem;

namespace {

struct cli_result {
    int code = 0;
    std::string out, err;
};

cli_result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli_run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string strip_wallclock(const std::string& text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
        if (line.rfind("# wallclock:", 0) != 0) kept += line + "\n";
    return kept;
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("fomatch_test_" + name);
}

}  // namespace

TEST_CASE("full-precision formatting survives a round trip") {
    for (double v : {0.1, 1.0 / 3.0, 2.0 - std::sqrt(2.0), 1e-17, 12345.6789}) {
        REQUIRE(std::stod(fmt_full(v)) == v);
    }
}

TEST_CASE("metadata comment carries the run provenance") {
    run_metadata md{"fomatch gen --family random", 7, "9.9.9", "2026-01-01T00:00:00Z"};
    const std::string c = metadata_comment(md);
    REQUIRE(c.find("# command: fomatch gen --family random\n") != std::string::npos);
    REQUIRE(c.find("# seed: 7\n") != std::string::npos);
    REQUIRE(c.find("# version: 9.9.9\n") != std::string::npos);
    REQUIRE(c.find("# wallclock: 2026-01-01T00:00:00Z\n") != std::string::npos);
    auto j = metadata_json(md);
    REQUIRE(j["seed"] == 7);
    REQUIRE(j["version"] == "9.9.9");
}

TEST_CASE("usage errors exit 2") {
    REQUIRE(run({}).code == 2);
    REQUIRE(run({"bogus"}).code == 2);
    REQUIRE(run({"gen"}).code == 2);                       // --family is required
    REQUIRE(run({"gen", "--family", "nope"}).code == 2);
    REQUIRE(run({"verify", "--only", "nope"}).code == 2);
    REQUIRE(run({"waterfill"}).code == 2);                 // no --in / --family
    REQUIRE(run({"thresholds", "--family", "rank-hard"}).code == 2);  // missing --u/--v
    REQUIRE(run({"--help"}).code == 0);
}

TEST_CASE("io failures exit 3") {
    auto r = run({"waterfill", "--in", "/nonexistent/foo.fom"});
    REQUIRE(r.code == 3);
    auto bad = temp_file("bad.fom");
    std::ofstream(bad) << "not an instance\n";
    REQUIRE(run({"waterfill", "--in", bad.string()}).code == 3);  // parse errors are io-class
    fs::remove(bad);
}

TEST_CASE("gen output is deterministic up to the wallclock stamp") {
    auto a = run({"gen", "--family", "random", "--n", "8", "--p", "0.5", "--seed", "7"});
    auto b = run({"gen", "--family", "random", "--n", "8", "--p", "0.5", "--seed", "7"});
    REQUIRE(a.code == 0);
    REQUIRE(strip_wallclock(a.out) == strip_wallclock(b.out));
    REQUIRE(a.out.find("# opt: ") != std::string::npos);
    // the payload parses back into a valid instance
    instance inst = load_instance(a.out);
    REQUIRE(inst.n == 8);
}

TEST_CASE("gen writes a loadable file and a summary") {
    auto path = temp_file("gen.fom");
    auto r = run({"gen", "--family", "wf-hard", "--k", "4", "--m", "2", "--out", path.string()});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("vertices 16, edges 33") != std::string::npos);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    instance inst = load_instance(ss.str());
    REQUIRE(inst.n == 16);
    REQUIRE(inst.edges.size() == 33);
    fs::remove(path);
}

TEST_CASE("waterfill certifies and reports in both formats") {
    auto r = run({"waterfill", "--family", "wf-hard", "--k", "6", "--m", "3"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("vertex,x,p,alpha") != std::string::npos);
    REQUIRE(r.out.find("edge,u,v,x_uv") != std::string::npos);
    REQUIRE(r.err.find("-> PASS") != std::string::npos);

    auto rj = run({"waterfill", "--family", "wf-hard", "--k", "6", "--m", "3", "--format",
                   "json"});
    REQUIRE(rj.code == 0);
    const auto start = rj.out.find('{');
    REQUIRE(start != std::string::npos);
    auto j = nlohmann::json::parse(rj.out.substr(start));
    REQUIRE(j["pass"] == true);
    REQUIRE(j["min_edge_sum"].get<double>() >= water_ratio() - 1e-9);
}

TEST_CASE("gen then waterfill round-trips through a file") {
    auto path = temp_file("roundtrip.fom");
    REQUIRE(run({"gen", "--family", "random", "--n", "10", "--p", "0.6", "--seed", "3",
                 "--out", path.string()})
                .code == 0);
    auto r = run({"waterfill", "--in", path.string()});
    REQUIRE(r.code == 0);
    REQUIRE(r.err.find("-> PASS") != std::string::npos);
    fs::remove(path);
}

TEST_CASE("stationary prints the profile and the gap") {
    auto r = run({"stationary", "--k", "50"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("j,a,p") != std::string::npos);
    REQUIRE(r.err.find("k 50: ratio") != std::string::npos);
    auto rj = run({"stationary", "--k", "50", "--format", "json"});
    auto j = nlohmann::json::parse(rj.out.substr(rj.out.find('{')));
    REQUIRE(j["k"] == 50);
    REQUIRE(j["p_star"].size() == 50);
}

TEST_CASE("ranking emits a trial table whose ratios check out") {
    auto r = run({"ranking", "--family", "rank-hard", "--k", "4", "--m", "3", "--trials",
                  "25", "--seed", "9"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("trial,seed,matched,opt,ratio") != std::string::npos);
    REQUIRE(r.err.find("bulk groups") != std::string::npos);
    // parse the csv rows back
    std::istringstream in(r.out);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't' || !std::isdigit(line[0]))
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        long long trial, seed, matched, opt;
        double ratio;
        ls >> trial >> seed >> matched >> opt;
        ls >> ratio;
        REQUIRE(opt == 12);
        REQUIRE(std::abs(ratio - static_cast<double>(matched) / 12.0) <= 1e-9);
        ++rows;
    }
    REQUIRE(rows == 25);

    // generic estimator path over --in
    auto path = temp_file("rank_in.fom");
    REQUIRE(run({"gen", "--family", "random", "--n", "8", "--p", "0.7", "--seed", "2",
                 "--out", path.string()})
                .code == 0);
    auto g = run({"ranking", "--in", path.string(), "--trials", "10"});
    REQUIRE(g.code == 0);
    REQUIRE(g.err.find("mean ratio") != std::string::npos);
    fs::remove(path);
}

TEST_CASE("thresholds artifact is well-formed json") {
    auto r = run({"thresholds", "--family", "rank-hard", "--k", "2", "--m", "2", "--u", "0",
                  "--v", "2", "--seed", "11"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out.substr(r.out.find('{')));
    REQUIRE(j["u"] == 0);
    REQUIRE(j["v"] == 2);
    REQUIRE(j["constancy_pass"] == true);
    REQUIRE(j["theta_samples"].is_array());
    REQUIRE_FALSE(j["theta_samples"].empty());
    for (const auto& s : j["theta_samples"]) {
        REQUIRE(s.contains("y_u"));
        REQUIRE(s.contains("theta"));
    }
}

TEST_CASE("verify emits one line per check and a json artifact") {
    auto r = run({"verify", "--only", "omega"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("[PASS] omega:defining-equation") != std::string::npos);
    REQUIRE(r.out.find("all checks passed") != std::string::npos);

    auto path = temp_file("checks.json");
    REQUIRE(run({"verify", "--only", "spot", "--out", path.string()}).code == 0);
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in);
    REQUIRE(j["pass"] == true);
    REQUIRE(j["checks"].is_array());
    REQUIRE(j["checks"].size() == 5);
    fs::remove(path);

    // a hopeless tolerance flips the exit code
    REQUIRE(run({"verify", "--only", "integrals", "--tol", "1e-300"}).code == 1);
}

TEST_CASE("constants are printed in full precision") {
    auto r = run({"constants"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("water_ratio = 0.58578643762690485") != std::string::npos);
    REQUIRE(r.out.find("omega = 0.56714329040978384") != std::string::npos);
    auto rj = run({"constants", "--format", "json"});
    auto j = nlohmann::json::parse(rj.out.substr(rj.out.find('{')));
    REQUIRE(j.contains("rank_gain_c"));
    REQUIRE(j["omega"].get<double>() == omega_constant());
}

TEST_CASE("report emits the requested table only") {
    auto r = run({"report", "--family", "stationary"});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("family,k,m,trials,seed,ratio,stderr,target,gap") != std::string::npos);
    REQUIRE(r.out.find("stationary,10,") != std::string::npos);
    REQUIRE(r.out.find("stationary,1000,") != std::string::npos);
    REQUIRE(r.out.find("wf-hard") == std::string::npos);

    auto rk = run({"report", "--family", "rank-hard", "--trials", "2", "--seed", "5"});
    REQUIRE(rk.code == 0);
    REQUIRE(rk.out.find("rank-hard,100,50,2,5,") != std::string::npos);
}

TEST_CASE("seed falls back to the environment") {
    setenv("FOM_SEED", "1234", 1);
    auto r = run({"gen", "--family", "random", "--n", "4", "--p", "1.0"});
    unsetenv("FOM_SEED");
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("# seed: 1234") != std::string::npos);

    setenv("FOM_SEED", "not-a-number", 1);
    auto bad = run({"gen", "--family", "random", "--n", "4", "--p", "1.0"});
    unsetenv("FOM_SEED");
    REQUIRE(bad.code == 2);

    // an explicit --seed wins over the environment
    setenv("FOM_SEED", "1234", 1);
    auto win = run({"gen", "--family", "random", "--n", "4", "--p", "1.0", "--seed", "9"});
    unsetenv("FOM_SEED");
    REQUIRE(win.out.find("# seed: 9") != std::string::npos);
}
