#include "doctest.h"
#include "json.hpp"
#include "mrp/error.hpp"
#include "mrp/executor.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/oneshot.hpp"
#include "mrp/twoshot.hpp"
#include "oracle.hpp"

using namespace mrp;

namespace {

TwoShotOptions opts() {
    TwoShotOptions o;
    o.solver.timeout_seconds = 300;
    o.phase_one_seconds = 300;
    o.probe_seconds = 120;
    o.travel_seconds = 60;
    return o;
}

// 9x4 corridor, 2x2 loop in the west end, single start cell in the east.
Scenario corridor() {
    auto s = tiny_fixture();
    s.name = "corridor";
    s.workspace = Workspace(9, 4);
    s.workers[0].loop = rectangle_loop({0, 1}, 2, 2, s.workers[0].primitives);
    s.workers[0].emax = 8;
    s.delta_max = 4;
    s.horizon = 9;
    s.potential_starts = {{8, 1}};
    return s;
}

}  // namespace

TEST_CASE("phase 1 minimum W matches the location-matching oracle") {
    auto s = tiny_fixture();
    s.horizon = 2 * s.workers[0].loop.size() - 1;
    const auto p1 = phase_one(s, opts());
    REQUIRE(p1.status == smt::Status::Optimal);
    oracle::SearchRules rules;
    rules.charge_matching = false;
    rules.recharger_return = false;
    const auto want = oracle::minimum_wait(s, rules);
    REQUIRE(want.min_wait);
    CHECK(p1.W == *want.min_wait);
    // at least one full loop fits
    int moves = 0;
    for (const auto& a : p1.worker_plans[0]) moves += std::holds_alternative<MotionPrimitive>(a);
    CHECK(moves >= s.workers[0].loop.size());
}

TEST_CASE("a worker that never runs low has no recharge instances") {
    auto s = tiny_fixture();
    s.workers[0].emax = 100;
    s.horizon = 17;
    const auto p1 = phase_one(s, opts());
    REQUIRE(p1.status == smt::Status::Optimal);
    CHECK(p1.W == 0);
    for (const auto& e : p1.eta) CHECK(e.empty());
    CHECK(p1.events.empty());
}

TEST_CASE("a horizon shorter than the loop leaves only waiting") {
    auto s = tiny_fixture();
    s.horizon = 6;
    const auto p1 = phase_one(s, opts());
    REQUIRE(p1.status == smt::Status::Optimal);
    CHECK(p1.W == s.horizon - 1);
    CHECK(p1.zeta[0].tau == 0);
    CHECK(p1.zeta[0].d == 0);
}

TEST_CASE("nothing to repair: T' equals T") {
    auto s = tiny_fixture();
    s.horizon = 6;
    const auto r = plan_twoshot(s, opts());
    CHECK(r.phase2.bundle.T_prime == s.horizon);
    CHECK(validate(r.phase2.bundle, s).ok());
}

TEST_CASE("refill and travel compose the extension, as a BFS bound predicts") {
    const auto s = corridor();
    const auto p1 = phase_one(s, opts());
    REQUIRE(p1.status == smt::Status::Optimal);
    REQUIRE(p1.W == 0);
    const auto& z = p1.zeta[0];
    CHECK(z.tau == 8);
    CHECK(z.d == 2);
    const Cell home = s.workers[0].loop.home();
    const int D = oracle::bfs_distance(s.workspace, p1.recharger_starts[0], oracle::ring(s.workspace, home));
    CHECK(D == 7);
    const auto p2 = phase_two(s, p1, opts());
    const int expect = std::max(z.tau, D) + z.d + D + 1;
    CHECK(p2.bundle.T_prime == expect);
    CHECK(p2.minimality_proven);
    CHECK(check_phase_two(s, p1, expect - 1, opts().solver) == smt::Status::Unsatisfiable);
    CHECK(validate(p2.bundle, s).ok());
}

TEST_CASE("contradictory pins exhaust the search cap") {
    const auto s = corridor();
    auto p1 = phase_one(s, opts());
    REQUIRE(p1.status == smt::Status::Optimal);
    // A service instant the recharger cannot possibly reach from (8,1) at step 1.
    p1.eta[0].push_back({1, s.workers[0].loop.point(1), 0});
    auto o = opts();
    o.t_prime_cap = s.horizon + 6;
    CHECK_THROWS_AS(phase_two(s, p1, o), PlanningError);
}

TEST_CASE("loop-count certificate needs a strict margin") {
    const auto s = tiny_fixture();  // |L| = 8
    PlanBundle b;
    b.T_prime = 20;
    std::vector<WorkerResidual> z{{14, 0, 0}};
    auto r = certify_loop_counts(s, b, z);
    CHECK(r.certified);
    CHECK(r.margins == std::vector<int>{3});
    z[0].tau = 11;
    r = certify_loop_counts(s, b, z);
    CHECK_FALSE(r.certified);
    CHECK(r.margins == std::vector<int>{0});
}

TEST_CASE("two-shot bundles satisfy every matching and repeat") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        CAPTURE(seed);
        const auto s = tiny_random_scenario(seed);
        const auto r = plan_twoshot(s, opts());
        const auto& b = r.phase2.bundle;
        const auto v = validate(b, s);
        CHECK(v.ok());
        CHECK_FALSE(v.has("position matching"));
        CHECK_FALSE(v.has("charge matching"));
        CHECK_FALSE(v.has("recharger return"));
        CHECK(replay_hypercycles(b, s, 2).ok);
        CHECK(b.T_prime >= s.horizon);
        CHECK(b.algorithm == "twoshot");
    }
}

TEST_CASE("two-shot E never exceeds one-shot E at the same T'") {
    const auto s = tiny_fixture();
    const auto r = plan_twoshot(s, opts());
    const auto& b = r.phase2.bundle;
    auto at_tp = s;
    at_tp.horizon = b.T_prime;
    OneShotOptions oo;
    oo.solver.timeout_seconds = 300;
    const auto one = plan_oneshot(at_tp, oo);
    REQUIRE(one.status == smt::Status::Optimal);
    CHECK(efficiency(b, s).E <= efficiency(*one.bundle, at_tp).E + 1e-9);
}

TEST_CASE("phase 1 result serializes") {
    const auto p1 = phase_one(tiny_fixture(), opts());
    const auto j = nlohmann::json::parse(phase_one_to_json(p1));
    CHECK(j.contains("zeta"));
    CHECK(j.contains("eta"));
    CHECK(j["zeta"].size() == 1);
}

TEST_CASE("an unreachable worker with a deficit stops phase 2") {
    auto s = tiny_fixture();
    // wall off the loop from the only start cell
    std::vector<Cell> wall;
    for (int y = 0; y < 5; ++y) wall.push_back({4, y});
    s.workspace = Workspace(6, 5, wall);
    s.potential_starts = {{5, 2}};
    // no recharge is needed within T, so phase 1 still succeeds
    const auto p1 = phase_one(s, opts());
    REQUIRE(p1.status == smt::Status::Optimal);
    REQUIRE(p1.zeta.front().d > 0);
    try {
        phase_two(s, p1, opts());
        FAIL("phase 2 should have thrown");
    } catch (const PlanningError& e) {
        CHECK(std::string(e.what()).find("worker 0") != std::string::npos);
    }
}
