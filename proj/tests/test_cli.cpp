// Black-box checks of the command-line tool.  The binary path arrives as the
// first program argument; every case shells out and inspects exit code,
// stdout, and stderr.
#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_bin;

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path temp_file(const std::string& tag) {
    static int counter = 0;
    std::ostringstream name;
    name << "mcmccert_cli_" << ::getpid() << '_' << counter++ << '_' << tag;
    return fs::temp_directory_path() / name.str();
}

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

CmdResult run_cli(const std::string& args) {
    const fs::path out = temp_file("out");
    const fs::path err = temp_file("err");
    const std::string cmd = g_bin + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    CmdResult r;
    if (status != -1 && WIFEXITED(status)) r.code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

std::vector<json> json_lines(const std::string& s) {
    std::vector<json> recs;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        recs.push_back(json::parse(line));
    }
    return recs;
}

json find_record(const std::vector<json>& recs, const std::string& name) {
    for (const json& r : recs)
        if (r.value("record", "") == name) return r;
    return json();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("help exits cleanly") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("plan --help").code == 0);
}

TEST_CASE("unknown options and missing subcommands are usage errors") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("plan --no-such-flag 3").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("certified plan for the reference chain, JSON mode") {
    const CmdResult r = run_cli("plan --preset table55 --row 1 --json");
    REQUIRE(r.code == 0);
    const std::vector<json> recs = json_lines(r.out);
    REQUIRE(!recs.empty());

    const json run = find_record(recs, "run");
    REQUIRE(!run.is_null());
    CHECK(run["schema_version"] == 1);
    CHECK(run["command"] == "plan");
    CHECK(run["seed"] == 20260815ULL);
    CHECK(contains(run["config_hash"].get<std::string>(), "0x"));

    const json rates = find_record(recs, "rates");
    REQUIRE(!rates.is_null());
    CHECK(rates["j"] == 4);
    CHECK(rates["j_r"] == 15);

    const json plan = find_record(recs, "plan");
    REQUIRE(!plan.is_null());
    CHECK(plan["mode"] == "one-walk");
    CHECK(plan["t"].get<double>() == 218.0);
    CHECK(plan["n"].get<double>() == doctest::Approx(6463111011.0).epsilon(1e-9));
    CHECK(plan["m"].get<double>() == 1.0);
}

TEST_CASE("median mode splits the budget across walks") {
    const CmdResult r = run_cli("plan --preset table55 --row 3 --json");
    REQUIRE(r.code == 0);
    const json plan = find_record(json_lines(r.out), "plan");
    REQUIRE(!plan.is_null());
    CHECK(plan["mode"] == "median");
    CHECK(plan["m"].get<double>() == 27.0);
    CHECK(plan["n"].get<double>() == doctest::Approx(5399875523.0).epsilon(1e-6));
    CHECK(plan["total_cost"].get<double>() ==
          doctest::Approx(27.0 * (plan["t"].get<double>() + plan["n"].get<double>()))
              .epsilon(1e-12));
}

TEST_CASE("reruns of the same configuration are bit-identical") {
    const std::string cmd = "plan --preset table55 --row 2 --json";
    const CmdResult a = run_cli(cmd);
    const CmdResult b = run_cli(cmd);
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
}

TEST_CASE("rates needs a preset or a full certificate") {
    const CmdResult r = run_cli("rates");
    CHECK(r.code == 2);
    CHECK(contains(r.err, "no chain given"));
}

TEST_CASE("explicit certificates run under the general-class bound") {
    const CmdResult r =
        run_cli("rates --beta-tilde 0.3 --lambda 0.8 --K 5 --grid 3 --json");
    REQUIRE(r.code == 0);
    const json rho = find_record(json_lines(r.out), "rho");
    REQUIRE(!rho.is_null());
    CHECK(rho["chain_class"] == "general");
}

TEST_CASE("a gamma point at or below rho is rejected with the computed value") {
    const CmdResult r = run_cli("rates --preset contracting-normals --gamma 0.5");
    CHECK(r.code == 2);
    CHECK(contains(r.err, "0.89"));  // quotes rho so the user can pick a valid point
}

TEST_CASE("zero accuracy target is a usage error") {
    const CmdResult r = run_cli("plan --preset table55 --eps 0");
    CHECK(r.code == 2);
}

TEST_CASE("precision targets underflow honestly") {
    const CmdResult r = run_cli("hrem --preset synthetic --target lambda-e");
    CHECK(r.code == 3);
    CHECK(contains(r.err, "numeric failure"));
}

TEST_CASE("sampler conflicting with the target is refused") {
    const CmdResult r = run_cli("hrem --preset synthetic --target lambda-e --sampler block");
    CHECK(r.code == 2);
    CHECK(contains(r.err, "fixed-scan"));
}

TEST_CASE("location-target pipeline certifies and plans") {
    const CmdResult r = run_cli("hrem --preset synthetic --target mu --json");
    REQUIRE(r.code == 0);
    const std::vector<json> recs = json_lines(r.out);
    const json plan = find_record(recs, "plan");
    REQUIRE(!plan.is_null());
    CHECK(plan["n"].get<double>() > 1e30);  // honest, astronomically conservative
    const json drift = find_record(recs, "drift");
    REQUIRE(!drift.is_null());
    CHECK(drift["lambda"].get<double>() == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("malformed observation files name the offending line") {
    const fs::path csv = temp_file("data.csv");
    {
        std::ofstream f(csv);
        f << "group,y\n1,0.5\noops\n2,1.5\n";
    }
    const CmdResult r = run_cli("hrem --data " + csv.string() + " --target mu");
    fs::remove(csv);
    CHECK(r.code == 2);
    CHECK(contains(r.err, "line 3"));

    const fs::path bad_header = temp_file("header.csv");
    {
        std::ofstream f(bad_header);
        f << "id,value\n1,0.5\n";
    }
    const CmdResult h = run_cli("hrem --data " + bad_header.string() + " --target mu");
    fs::remove(bad_header);
    CHECK(h.code == 2);
    CHECK(contains(h.err, "group,y"));
}

TEST_CASE("simulation budget cap refuses, --force overrides") {
    const CmdResult refused = run_cli("simulate --chain ar1 --t 100 --n 5000 --budget 1000");
    CHECK(refused.code == 2);
    CHECK(contains(refused.err, "budget"));

    const CmdResult forced =
        run_cli("simulate --chain ar1 --t 100 --n 5000 --budget 1000 --force");
    CHECK(forced.code == 0);
}

TEST_CASE("split simulation reports tours and both variance estimates") {
    const CmdResult r = run_cli(
        "simulate --chain ar1 --split --t 200 --n 30000 --f identity --seed 7 --json");
    REQUIRE(r.code == 0);
    const std::vector<json> recs = json_lines(r.out);
    const json walk = find_record(recs, "walk");
    REQUIRE(!walk.is_null());
    CHECK(walk["tours"].get<double>() > 100.0);
    CHECK(walk.contains("I_hat"));
    const json est = find_record(recs, "estimate");
    REQUIRE(!est.is_null());
    CHECK(est.contains("bm_sigma_sq"));
    CHECK(est.contains("rs_sigma_sq"));
    // the identity has asymptotic variance 3 under the default kernel
    CHECK(est["bm_sigma_sq"].get<double>() == doctest::Approx(3.0).epsilon(0.5));
    CHECK(est["rs_sigma_sq"].get<double>() == doctest::Approx(3.0).epsilon(0.5));
}

TEST_CASE("simulation output is seed-deterministic") {
    const std::string cmd = "simulate --chain five-state --split --n 2000 --seed 99 --json";
    const CmdResult a = run_cli(cmd);
    const CmdResult b = run_cli(cmd);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const CmdResult c =
        run_cli("simulate --chain five-state --split --n 2000 --seed 100 --json");
    REQUIRE(c.code == 0);
    CHECK(find_record(json_lines(a.out), "estimate")["estimate"].get<double>() !=
          find_record(json_lines(c.out), "estimate")["estimate"].get<double>());
}

TEST_CASE("trace dump holds the full path with its regeneration marks") {
    const fs::path trace = temp_file("trace.csv");
    const CmdResult r = run_cli("simulate --chain ar1 --t 5 --n 50 --split --dump-trace " +
                                trace.string());
    REQUIRE(r.code == 0);
    std::ifstream f(trace);
    REQUIRE(f.is_open());
    std::string line;
    REQUIRE(std::getline(f, line));
    CHECK(line == "index,state,bell");
    std::size_t rows = 0;
    while (std::getline(f, line)) {
        if (!line.empty()) ++rows;
    }
    f.close();
    fs::remove(trace);
    CHECK(rows == 51);  // the start state plus one row per transition
}

TEST_CASE("multi-walk simulation reports the median of the walk estimates") {
    const CmdResult r =
        run_cli("simulate --chain two-state --n 500 --m 5 --f identity --json");
    REQUIRE(r.code == 0);
    const std::vector<json> recs = json_lines(r.out);
    std::vector<double> walks;
    for (const json& rec : recs)
        if (rec.value("record", "") == "walk") walks.push_back(rec["estimate"].get<double>());
    REQUIRE(walks.size() == 5);
    std::sort(walks.begin(), walks.end());
    const json est = find_record(recs, "estimate");
    CHECK(est["scheme"] == "median");
    CHECK(est["estimate"].get<double>() == doctest::Approx(walks[2]).epsilon(1e-15));
}

TEST_CASE("adaptive demo prints the occupation series and its limit") {
    const CmdResult r = run_cli("adaptive-demo --policy trap --n 200 --reps 4");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "step,freq0,freq1"));
    CHECK(contains(r.out, "adaptive:"));
    CHECK(contains(r.out, "limit_freq1"));

    const CmdResult j = run_cli("adaptive-demo --policy trap --n 50 --reps 2 --json");
    REQUIRE(j.code == 0);
    const std::vector<json> recs = json_lines(j.out);
    const json sum = find_record(recs, "adaptive");
    REQUIRE(!sum.is_null());
    CHECK(sum["limit_freq1"].get<double>() == doctest::Approx(1.0 / 1.1).epsilon(1e-12));
    std::size_t occupation_rows = 0;
    for (const json& rec : recs)
        if (rec.value("record", "") == "occupation") ++occupation_rows;
    CHECK(occupation_rows == 51);
}

TEST_CASE("records can be routed to a file") {
    const fs::path out = temp_file("report.jsonl");
    const CmdResult r = run_cli("plan --preset table55 --row 1 --json --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    const std::vector<json> recs = json_lines(slurp(out));
    fs::remove(out);
    CHECK(!find_record(recs, "plan").is_null());
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <mcmccert-binary> [doctest options]\n", argv[0]);
        return 2;
    }
    g_bin = argv[1];
    doctest::Context ctx;
    std::vector<const char*> args;
    args.push_back(argv[0]);
    for (int i = 2; i < argc; ++i) args.push_back(argv[i]);
    ctx.applyCommandLine(static_cast<int>(args.size()), args.data());
    return ctx.run();
}
