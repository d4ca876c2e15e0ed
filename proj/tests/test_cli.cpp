#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "adpol/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::initializer_list<std::string> args) {
    std::vector<std::string> storage{"adpol"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : storage) {
        argv.push_back(s.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = adpol::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) {
    const fs::path dir = ADPOL_TEST_TMP;
    fs::create_directories(dir);
    return (dir / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("simulate writes a CSV trace and exits 0 when adiabatic") {
    const auto path = tmp("sim.csv");
    const auto r = run({"simulate", "--protocol", "level-crossing", "--omega0L", "100", "--steps", "20000",
                        "--samples", "101", "--out", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("fidelity:") != std::string::npos);
    const auto csv = slurp(path);
    CHECK(csv.rfind("z,s1,s2,s3,omega1,omega2,omega3,sigma\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 102);
}

TEST_CASE("simulate is byte-for-byte reproducible") {
    const auto a = tmp("rep_a.csv");
    const auto b = tmp("rep_b.csv");
    for (const auto& p : {a, b}) {
        REQUIRE(run({"simulate", "--protocol", "case-a", "--steps", "5000", "--samples", "51", "--out", p}).code == 0);
    }
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("simulate JSON output") {
    const auto path = tmp("sim.json");
    const auto r = run({"simulate", "--protocol", "fractional", "--alpha", "0.3", "--omega0L", "150", "--steps",
                        "10000", "--samples", "11", "--format", "json", "--out", path});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(path));
    CHECK(doc["protocol"]["kind"] == "fractional");
    CHECK(doc["trace"]["z"].size() == 11);
    CHECK(doc["fidelity"].get<double>() > 0.99);
    CHECK(doc["adiabaticity"]["satisfied"].get<bool>());
}

TEST_CASE("simulate exits 1 when the adiabaticity check fails") {
    const auto r = run({"simulate", "--protocol", "case-a", "--omega0L", "1", "--steps", "1000"});
    CHECK(r.code == 1);
    CHECK(r.err.find("adiabaticity") != std::string::npos);
}

TEST_CASE("simulate with a material reports the design condition") {
    const auto ok = run({"simulate", "--protocol", "case-b", "--delta-n", "10", "--lambda", "1", "--steps", "2000"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("L*dn >= 3*lambda: yes") != std::string::npos);
    const auto partial = run({"simulate", "--protocol", "case-b", "--delta-n", "10"});
    CHECK(partial.code == 2);
}

TEST_CASE("simulate with a tabulated profile") {
    const auto table = tmp("profile.txt");
    {
        std::ofstream f(table);
        f << "# constant field along S1\n0 50 0 0\n1 50 0 0\n";
    }
    const auto r = run({"simulate", "--protocol", "case-a", "--profile-file", table, "--steps", "1000"});
    CHECK(r.code == 0);
    const auto bad = tmp("bad_profile.txt");
    {
        std::ofstream f(bad);
        f << "0 1 2\n";
    }
    CHECK(run({"simulate", "--protocol", "case-a", "--profile-file", bad}).code == 1);
}

TEST_CASE("argument errors exit 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"simulate"}).code == 2);
    CHECK(run({"simulate", "--protocol", "stirap"}).code == 2);
    CHECK(run({"simulate", "--protocol", "case-a", "--method", "euler"}).code == 2);
    CHECK(run({"simulate", "--protocol", "case-a", "--steps", "10", "--samples", "50"}).code == 2);
    CHECK(run({"sweep", "--protocol", "case-a", "--param", "area", "--range", "5:1", "--out", tmp("x.csv")}).code == 2);
    CHECK(run({"sweep", "--protocol", "case-a", "--param", "area", "--range", "abc", "--out", tmp("x.csv")}).code == 2);
    CHECK(run({"sweep", "--protocol", "case-a", "--param", "area", "--range", "1:2", "--samples", "1", "--out",
               tmp("x.csv")})
              .code == 2);
    CHECK(run({"validate", "--suite", "nonsense"}).code == 2);
    CHECK(run({"protocols"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("sweep writes CSV, summary and broadband comparison") {
    const auto out = tmp("wl.csv");
    const auto r = run({"sweep", "--protocol", "case-a", "--param", "wavelength", "--range", "0.5:1.5", "--samples",
                        "11", "--omega0L", "62.83185307179586", "--steps", "5000", "--out", out});
    REQUIRE(r.code == 0);
    const auto csv = slurp(out);
    CHECK(csv.rfind("param,value,s1,s2,s3,fidelity\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 12);
    const auto summary = nlohmann::json::parse(slurp(tmp("wl.summary.json")));
    CHECK(summary["grid"]["samples"] == 11);
    CHECK(summary["delta_n"].get<double>() == doctest::Approx(10.0));
    CHECK(summary["broadband"]["min_adiabatic"].get<double>() > 0.99);
    CHECK(summary["broadband"]["min_waveplate"].get<double>() < 0.9);
    CHECK(summary["min_fidelity"].get<double>() <= summary["median_fidelity"].get<double>());
    const auto compare = slurp(tmp("wl.broadband.csv"));
    CHECK(compare.rfind("lambda,adiabatic_fidelity,waveplate_fidelity,delta\n", 0) == 0);
}

TEST_CASE("sweep output does not depend on the thread count") {
    const auto a = tmp("t1.csv");
    const auto b = tmp("t4.csv");
    REQUIRE(run({"sweep", "--protocol", "level-crossing", "--param", "area", "--range", "1:40", "--samples", "9",
                 "--steps", "2000", "--threads", "1", "--out", a})
                .code == 0);
    REQUIRE(run({"sweep", "--protocol", "level-crossing", "--param", "area", "--range", "1:40", "--samples", "9",
                 "--steps", "2000", "--threads", "4", "--out", b})
                .code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(tmp("t1.summary.json")) == slurp(tmp("t4.summary.json")));
}

TEST_CASE("validate emits a JSON report") {
    const auto path = tmp("validate.json");
    const auto r = run({"validate", "--steps", "20000", "--suite", "conservation", "--suite", "convergence", "--out",
                        path});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(path));
    CHECK(doc["passed"].get<bool>());
    CHECK(doc["suites"].size() == 2);
    // A coarse analytic run fails and exits 1.
    CHECK(run({"validate", "--steps", "10", "--suite", "analytic"}).code == 1);
}

TEST_CASE("protocols list") {
    const auto text = run({"protocols", "list"});
    CHECK(text.code == 0);
    for (const char* name : {"case-a", "case-b", "level-crossing", "fractional"}) {
        CHECK(text.out.find(name) != std::string::npos);
    }
    const auto json = run({"protocols", "list", "--format", "json"});
    CHECK(json.code == 0);
    const auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["protocols"].size() == 4);
}

TEST_CASE("spec-level CLI examples") {
    const auto trace = tmp("lc.csv");
    const auto lc = run({"simulate", "--protocol", "level-crossing", "--omega0L", "100", "--steps", "100000", "--out",
                         trace});
    CHECK(lc.code == 0);
    CHECK(lc.out.find("final: ") != std::string::npos);

    const auto zero = run({"simulate", "--protocol", "case-a", "--omega0L", "0"});
    CHECK(zero.code == 1);
    CHECK(zero.err.find("adiabaticity") != std::string::npos);

    const auto area = tmp("area.csv");
    REQUIRE(run({"sweep", "--protocol", "level-crossing", "--param", "area", "--range", "1:100", "--samples", "50",
                 "--steps", "5000", "--out", area})
                .code == 0);
    const auto summary = nlohmann::json::parse(slurp(tmp("area.summary.json")));
    CHECK(summary.contains("trend"));
    CHECK(summary["trend"]["direction"] == "increasing");
    const auto area_csv = slurp(area);
    CHECK(std::count(area_csv.begin(), area_csv.end(), '\n') == 51);

    const auto coarse = run({"validate", "--steps", "10", "--suite", "convergence"});
    CHECK(coarse.code == 1);
    const auto only = run({"validate", "--steps", "20000", "--suite", "equivalence"});
    CHECK(only.code == 0);
    const auto doc = nlohmann::json::parse(only.out);
    CHECK(doc["suites"].size() == 1);
    CHECK(doc["suites"].contains("equivalence"));
}
