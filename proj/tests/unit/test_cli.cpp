// Drives the mrp executable end to end and checks exit codes and outputs.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("mrp_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = std::string(MRP_CLI_PATH) + " " + args + " >" + (scratch() / "stdout.txt").string() +
                            " 2>" + (scratch() / "stderr.txt").string();
    const int st = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(st));
    return WEXITSTATUS(st);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("fixture, plan, validate, replay, simulate, render") {
    const auto dir = scratch() / "flow";
    fs::create_directories(dir);
    const auto scen = dir / "tiny.json";
    CHECK(run("fixture --name tiny --out " + q(scen)) == 0);
    REQUIRE(fs::exists(scen));

    CHECK(run("plan --algo greedy --scenario " + q(scen) + " --out-dir " + q(dir)) == 0);
    REQUIRE(fs::exists(dir / "bundle.json"));
    REQUIRE(fs::exists(dir / "efficiency.json"));
    CHECK(slurp(scratch() / "stdout.txt").find("E=") != std::string::npos);

    const auto bundle = dir / "bundle.json";
    CHECK(run("validate --scenario " + q(scen) + " --bundle " + q(bundle)) == 0);
    CHECK(run("replay --scenario " + q(scen) + " --bundle " + q(bundle) + " --cycles 3") == 0);
    CHECK(run("simulate --scenario " + q(scen) + " --bundle " + q(bundle) + " --cycles 4 --jitter 2 --seed 7") == 0);
    CHECK(run("render --scenario " + q(scen) + " --bundle " + q(bundle) + " --out " + q(dir / "r.svg")) == 0);
    CHECK(slurp(dir / "r.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("a tampered bundle fails validation with exit 1") {
    const auto dir = scratch() / "tamper";
    fs::create_directories(dir);
    REQUIRE(run("plan --algo greedy --scenario fixture:tiny --out-dir " + q(dir)) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "bundle.json"));
    REQUIRE(j.contains("recharge_events"));
    j["recharge_events"] = nlohmann::json::array();
    spit(dir / "bad.json", j.dump());
    CHECK(run("validate --scenario fixture:tiny --bundle " + q(dir / "bad.json")) == 1);
    CHECK(slurp(scratch() / "stdout.txt").find("recharge without recharger") != std::string::npos);
}

TEST_CASE("invalid input exits 3") {
    const auto dir = scratch() / "invalid";
    fs::create_directories(dir);
    spit(dir / "junk.json", "{ not json");
    CHECK(run("plan --algo greedy --scenario " + q(dir / "junk.json") + " --out-dir " + q(dir)) == 3);
    CHECK(run("plan --algo greedy --scenario fixture:nowhere") == 3);
    CHECK(run("plan --algo astar --scenario fixture:tiny") == 3);
    CHECK(run("plan --scenario") == 3);

    REQUIRE(run("fixture --name tiny --out " + q(dir / "tiny.json")) == 0);
    auto k = nlohmann::json::parse(slurp(dir / "tiny.json"));
    k["rechargers"] = nlohmann::json::array();
    spit(dir / "none.json", k.dump());
    CHECK(run("plan --algo greedy --scenario " + q(dir / "none.json")) == 3);
    CHECK(slurp(scratch() / "stderr.txt").find("recharger") != std::string::npos);
}

TEST_CASE("infeasible oneshot exits 1, a broken solver exits 2") {
    const auto dir = scratch() / "solver";
    fs::create_directories(dir);
    REQUIRE(run("fixture --name tiny --out " + q(dir / "tiny.json")) == 0);
    auto j = nlohmann::json::parse(slurp(dir / "tiny.json"));
    j["potential_starts"] = nlohmann::json::array();
    spit(dir / "nop.json", j.dump());
    CHECK(run("plan --algo oneshot --timeout-secs 60 --scenario " + q(dir / "nop.json") + " --out-dir " + q(dir)) == 1);
    CHECK(run("plan --algo oneshot --solver-cmd /nonexistent/solver --scenario fixture:tiny --out-dir " + q(dir)) ==
          2);
}

TEST_CASE("sweep writes csv and svg") {
    const auto dir = scratch() / "sweep";
    CHECK(run("sweep --scenario fixture:tiny --kind T --values 10,14 --algos greedy --out-dir " + q(dir)) == 0);
    const auto csv = slurp(dir / "sweep_T.csv");
    CHECK(csv.rfind("#", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(fs::exists(dir / "sweep_T.svg"));
}
