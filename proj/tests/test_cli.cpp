#include "phaselab/cli.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const char* tag) {
        path = fs::temp_directory_path() / (std::string("phaselab_test_") + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

json load(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

int run(std::vector<std::string> args) { return phaselab::cli::dispatch(args); }

}  // namespace

TEST_CASE("vaughan-check emits a passing report") {
    TempDir dir("vaughan");
    CHECK(run({"vaughan-check", "--x", "1000", "--outdir", dir.str()}) == 0);
    json j = load(dir.path / "vaughan-check.json");
    CHECK(j["schema_version"] == 1);
    CHECK(j["verb"] == "vaughan-check");
    CHECK((double)j["max_abs_error"] < 1e-6);
    CHECK((int)j["J"] > 0);
    CHECK(j.contains("wall_ms"));
    CHECK(j["config"]["x"] == 1000);
}

TEST_CASE("bv-scan: single row at tiny x, csv artifact") {
    TempDir dir("bv");
    CHECK(run({"bv-scan", "--x", "10", "--theta", "0.25", "--f", "lambda", "--phase", "0", "--outdir", dir.str()}) ==
          0);
    json j = load(dir.path / "bv-scan.json");
    CHECK(j["rows"] == 1);
    std::ifstream csv(dir.path / "bv-scan.csv");
    std::string header, row, extra;
    std::getline(csv, header);
    std::getline(csv, row);
    CHECK(header == "d,c_worst,twisted_re,twisted_im,main_re,main_im,disc");
    CHECK(row.rfind("1,1,", 0) == 0);
    CHECK(!std::getline(csv, extra));
}

TEST_CASE("malformed phase spec exits with the config code") {
    TempDir dir("badphase");
    CHECK(run({"bv-scan", "--x", "100", "--phase", "2:one/3", "--outdir", dir.str()}) == 2);
    CHECK(run({"weyl", "--phase", "2:one/3", "--outdir", dir.str()}) == 2);
    CHECK(run({"no-such-verb"}) == 2);
    CHECK(run({"bv-scan", "--no-such-flag", "1"}) == 2);
}

TEST_CASE("capacity violations exit 3") {
    TempDir dir("cap");
    // primorial threshold beyond the 200 cap
    CHECK(run({"bv-scan", "--x", "100", "--w", "500", "--outdir", dir.str()}) == 3);
}

TEST_CASE("determinism: identical config and seed give identical artifacts") {
    TempDir d1("det1"), d2("det2");
    std::vector<std::string> args{"bv-scan", "--x",   "2000",       "--theta", "0.3",  "--f",
                                  "lambda",  "--phase", "2:sqrt2m1", "--seed",  "777"};
    auto a1 = args;
    a1.push_back("--outdir");
    a1.push_back(d1.str());
    auto a2 = args;
    a2.push_back("--outdir");
    a2.push_back(d2.str());
    REQUIRE(run(a1) == 0);
    REQUIRE(run(a2) == 0);

    // CSV must match byte for byte
    std::ifstream c1(d1.path / "bv-scan.csv"), c2(d2.path / "bv-scan.csv");
    std::stringstream s1, s2;
    s1 << c1.rdbuf();
    s2 << c2.rdbuf();
    CHECK(s1.str() == s2.str());
    CHECK(!s1.str().empty());

    // JSON matches after erasing the wall-time field
    json j1 = load(d1.path / "bv-scan.json"), j2 = load(d2.path / "bv-scan.json");
    j1.erase("wall_ms");
    j2.erase("wall_ms");
    CHECK(j1 == j2);
}

TEST_CASE("config file round-trip") {
    TempDir dir("cfg");
    fs::path cfg = dir.path / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "x=1500\ntheta=0.3\nf=mu\nphase=\"1:golden\"\nseed=5\noutdir=\"" << dir.str() << "\"\n";
    }
    REQUIRE(run({"bv-scan", "--config", cfg.string()}) == 0);
    json j_cfg = load(dir.path / "bv-scan.json");

    REQUIRE(run({"bv-scan", "--x", "1500", "--theta", "0.3", "--f", "mu", "--phase", "1:golden", "--seed", "5",
                 "--outdir", dir.str(), "--out", "direct"}) == 0);
    json j_direct = load(dir.path / "direct.json");

    j_cfg.erase("wall_ms");
    j_direct.erase("wall_ms");
    CHECK(j_cfg == j_direct);

    // unknown keys rejected
    {
        std::ofstream f(cfg, std::ios::app);
        f << "no_such_key=1\n";
    }
    CHECK(run({"bv-scan", "--config", cfg.string()}) == 2);
}

TEST_CASE("equidist verb reports the obstruction") {
    TempDir dir("eq");
    CHECK(run({"equidist", "--phase", "2:1/3", "--n", "10000", "--delta", "0.1", "--outdir", dir.str()}) == 0);
    json j = load(dir.path / "equidist.json");
    CHECK(j["obstructed"] == true);
    CHECK(j["ell"] == 3);
    CHECK(j["evidence"]["length"].get<long long>() >= 1000);
}

TEST_CASE("minorant-audit passes and hb-check runs") {
    TempDir dir("ma");
    CHECK(run({"minorant-audit", "--rho", "0.1", "--eta", "0.2", "--grid", "20000", "--outdir", dir.str()}) == 0);
    json j = load(dir.path / "minorant-audit.json");
    CHECK(j["minorant_ok"] == true);
    CHECK(j["coeff_ok"] == true);
    CHECK(j["tail_ok"] == true);

    CHECK(run({"hb-check", "--x", "2000", "--f", "d2", "--outdir", dir.str()}) == 0);
    json h = load(dir.path / "hb-check.json");
    CHECK((double)h["max_abs_error_off_mask"] < 1e-6);
    CHECK((double)h["masked_fraction"] > 0);
}

TEST_CASE("emit-plotdata produces the decay series file") {
    TempDir dir("plot");
    CHECK(run({"bv-scan", "--x", "1000", "--x-series", "500", "--x-series", "1000", "--emit-plotdata", "--phase",
               "2:sqrt2m1", "--outdir", dir.str()}) == 0);
    std::ifstream plot(dir.path / "bv-scan_plot.csv");
    std::string line;
    std::getline(plot, line);
    CHECK(line == "x,normalized");
    int rows = 0;
    while (std::getline(plot, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 2);
    json j = load(dir.path / "bv-scan.json");
    CHECK(j["series"].size() == 2);
}

TEST_CASE("artifacts are self-describing: re-running the echoed config reproduces them") {
    TempDir d1("echo1"), d2("echo2");
    REQUIRE(run({"bv-scan", "--x", "1200", "--theta", "0.3", "--f", "mu", "--phase", "2:1/3", "--seed", "11",
                 "--outdir", d1.str()}) == 0);
    json j1 = load(d1.path / "bv-scan.json");

    // rebuild the command line from the config echo
    std::vector<std::string> args{"bv-scan"};
    auto add = [&](const std::string& flag, const json& v) {
        args.push_back("--" + flag);
        args.push_back(v.is_string() ? v.get<std::string>() : json(v).dump());
    };
    add("x", j1["config"]["x"]);
    add("theta", j1["config"]["theta"]);
    add("f", j1["config"]["f"]);
    add("phase", j1["config"]["phase"]);
    add("w", j1["config"]["w"]);
    add("residues", j1["config"]["residues"]);
    args.push_back("--seed");
    args.push_back(json(j1["seed"]).dump());
    args.push_back("--outdir");
    args.push_back(d2.str());
    REQUIRE(run(args) == 0);

    json j2 = load(d2.path / "bv-scan.json");
    j1.erase("wall_ms");
    j2.erase("wall_ms");
    j1["config"].erase("x_series");
    j2["config"].erase("x_series");
    CHECK(j1 == j2);
}

TEST_CASE("gowers and singular-series verbs") {
    TempDir dir("gw");
    CHECK(run({"gowers", "--q", "2", "--a", "1", "--n", "100", "--k", "2", "--outdir", dir.str()}) == 0);
    json j = load(dir.path / "gowers.json");
    CHECK((double)j["norm"] > 0);
    CHECK(j["primorial_divides"] == true);

    CHECK(run({"singular-series", "--forms", "1,0;1,2", "--p-cut", "10000", "--outdir", dir.str()}) == 0);
    json s = load(dir.path / "singular-series.json");
    CHECK((double)s["value"] == doctest::Approx(1.3203).epsilon(1e-3));
}

TEST_CASE("check verbs exit 1 when their gate fails") {
    TempDir dir("gate");
    // the identity is exact to ~1e-14; an absurd tolerance must trip the gate
    CHECK(run({"vaughan-check", "--x", "1000", "--tol", "1e-20", "--outdir", dir.str()}) == 1);
    CHECK(run({"vaughan-check", "--x", "1000", "--tol", "1e-6", "--outdir", dir.str()}) == 0);
}
