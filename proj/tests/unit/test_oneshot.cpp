#include "doctest.h"
#include "json.hpp"
#include "mrp/executor.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/oneshot.hpp"
#include "oracle.hpp"

using namespace mrp;

namespace {

OneShotOptions opts() {
    OneShotOptions o;
    o.solver.timeout_seconds = 300;
    return o;
}

int waits_in(const PlanBundle& b) {
    int n = 0;
    for (const auto& w : b.workers)
        for (const auto& a : w.actions) n += std::holds_alternative<Wait>(a);
    return n;
}

}  // namespace

TEST_CASE("8-cell loop, emax for two loops, T=20: optimal, valid, oracle W") {
    auto s = tiny_fixture();
    s.workers[0].emax = 16;
    s.potential_starts = {{4, 4}};
    s.horizon = 20;
    const auto r = plan_oneshot(s, opts());
    REQUIRE(r.status == smt::Status::Optimal);
    REQUIRE(r.bundle);
    const auto v = validate(*r.bundle, s);
    CHECK(v.ok());
    CHECK(r.bundle->T_prime == 20);
    const auto want = oracle::minimum_wait(s);
    REQUIRE(want.min_wait);
    CHECK(waits_in(*r.bundle) == *want.min_wait);
    CHECK(r.objective_values.front() == *want.min_wait);
}

TEST_CASE("one loop per hypercycle without recharge needs no waiting") {
    // The worker has to end at full charge, so a wait-free loop needs free moves.
    auto j = nlohmann::json::parse(scenario_to_json(tiny_fixture()));
    for (auto& [name, set] : j["primitive_sets"].items())
        for (auto& prim : set) prim["cost"] = 0;
    auto s = scenario_from_json(j.dump());
    s.horizon = s.workers[0].loop.size() + 1;
    const auto r = plan_oneshot(s, opts());
    REQUIRE(r.status == smt::Status::Optimal);
    CHECK(r.objective_values.front() == 0);
    for (const auto& a : r.bundle->workers[0].actions) CHECK(std::holds_alternative<MotionPrimitive>(a));
    CHECK(validate(*r.bundle, s).ok());
}

TEST_CASE("no potential starts with a worker that needs charge is unsatisfiable") {
    auto s = tiny_fixture();
    s.potential_starts.clear();
    const auto r = plan_oneshot(s, opts());
    CHECK(r.status == smt::Status::Unsatisfiable);
    CHECK_FALSE(r.bundle);
}

TEST_CASE("a horizon too short for one loop is warned about") {
    auto s = tiny_fixture();
    s.horizon = 6;
    const auto r = plan_oneshot(s, opts());
    CHECK(!r.warnings.empty());
    // position matching forces the worker to stay home
    REQUIRE(r.bundle);
    CHECK(waits_in(*r.bundle) == 5);
}

TEST_CASE("extracted plans keep rechargers clear of each other and of workers") {
    auto s = small_random_scenario(4);
    s.horizon = std::min(s.horizon, 14);
    const auto r = plan_oneshot(s, opts());
    if (r.status == smt::Status::Unsatisfiable) return;
    REQUIRE(r.bundle);
    const auto v = validate(*r.bundle, s);
    CHECK(v.ok());
    CHECK_FALSE(v.has("collision"));
    CHECK(r.bundle->algorithm == "oneshot");
}

TEST_CASE("weighted mode uses w1 and w2") {
    auto s = tiny_fixture();
    s.objective_mode = ObjectiveMode::Weighted;
    const auto p = encode_oneshot(s);
    REQUIRE(p.objectives().size() == 1);
    const auto r = plan_oneshot(s, opts());
    REQUIRE(r.status == smt::Status::Optimal);
    const auto e = efficiency(*r.bundle, s);
    CHECK(r.objective_values.front() == s.w1 * e.W + s.w2 * e.U);
}

TEST_CASE("the query extracts a bundle sized to its horizon") {
    const auto s = tiny_fixture();
    OneShotQuery q(s, opts());
    CHECK(q.horizon() == 12);
    const auto out = smt::solve(q.program(), opts().solver);
    REQUIRE(out.has_model());
    const auto b = q.extract_plan(*out.model);
    CHECK(b.T_prime == 12);
    CHECK(b.workers[0].actions.size() == 11);
    CHECK(b.recharger_starts.size() == 1);
    CHECK(validate(b, s).ok());
}

TEST_CASE("encoding options do not change the optimum") {
    const auto s = tiny_random_scenario(2);
    auto plain = opts();
    plain.distance_hints = false;
    plain.symmetry_breaking = false;
    const auto a = plan_oneshot(s, opts());
    const auto b = plan_oneshot(s, plain);
    REQUIRE(a.status == b.status);
    if (a.status == smt::Status::Optimal) CHECK(a.objective_values.front() == b.objective_values.front());
}
