#include "doctest.h"
#include "json.hpp"
#include "mrp/error.hpp"
#include "mrp/executor.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/greedy.hpp"

using namespace mrp;

namespace {

// One pure loop with the recharger parked at `park` for the whole cycle.
PlanBundle parked(const Scenario& s, Cell park) {
    const auto& L = s.workers[0].loop;
    std::vector<Primitive> w(L.moves().begin(), L.moves().end());
    std::vector<Primitive> r(w.size(), Wait{});
    return assemble_bundle(s, "test", static_cast<int>(w.size()) + 1, {w}, {r}, {park}, {});
}

PlanBundle mutated(PlanBundle b, const Scenario& s, bool worker, int robot, int step, Primitive p) {
    auto& plan = worker ? b.workers[static_cast<std::size_t>(robot)] : b.rechargers[static_cast<std::size_t>(robot)];
    plan.actions[static_cast<std::size_t>(step)] = std::move(p);
    if (worker)
        std::erase_if(b.events, [&](const RechargeEvent& e) { return e.worker == robot && e.step == step; });
    rebuild_trajectories(b, s);
    return b;
}

int first_event_step(const PlanBundle& b) { return b.events.empty() ? -1 : b.events.front().step; }

}  // namespace

TEST_CASE("planner bundles validate") {
    for (const auto& name : {"tiny", "warehouse", "artificial-floor"}) {
        CAPTURE(name);
        const auto s = fixture_by_name(name);
        const auto b = plan_greedy(s);
        const auto v = validate(b, s);
        CHECK(v.ok());
        if (!v.ok()) MESSAGE(validation_to_json(v));
    }
}

TEST_CASE("a recharge with no recharger is reported") {
    const auto s = tiny_fixture();
    auto b = plan_greedy(s);
    REQUIRE(!b.events.empty());
    b.events.erase(b.events.begin());
    const auto v = validate(b, s);
    CHECK(v.has("recharge without recharger"));
}

TEST_CASE("a final charge below emax breaks charge matching") {
    const auto s = tiny_fixture();
    const auto b = plan_greedy(s);
    const int t = b.events.back().step;
    const auto bad = mutated(b, s, true, 0, t, Wait{});
    const auto v = validate(bad, s);
    CHECK(v.has("charge matching"));
}

TEST_CASE("a recharger on the loop collides with the worker") {
    auto s = tiny_fixture();
    s.horizon = 9;
    s.potential_starts = {{2, 1}};
    const auto v = validate(parked(s, {2, 1}), s);
    CHECK(v.has("collision"));
    s.potential_starts = {{0, 0}};
    CHECK_FALSE(validate(parked(s, {0, 0}), s).has("collision"));
}

TEST_CASE("bundle-level checks") {
    const auto s = tiny_fixture();
    auto b = plan_greedy(s);
    auto other = b;
    other.scenario_digest = "00";
    CHECK(validate(other, s).has("scenario digest"));
    auto p = s;
    p.potential_starts = {{4, 4}};
    CHECK(validate(plan_greedy(s), p).has("start not in P"));
    auto short_plan = b;
    short_plan.workers[0].actions.pop_back();
    CHECK(validate(short_plan, s).has("plan length"));
}

TEST_CASE("single action mutations trip a clause") {
    const auto s = tiny_fixture();
    const auto b = plan_greedy(s);
    REQUIRE(validate(b, s).ok());
    int tried = 0;
    for (int t = 0; t + 1 < b.T_prime; ++t) {
        const auto& a = b.workers[0].actions[static_cast<std::size_t>(t)];
        if (!std::holds_alternative<Wait>(a)) {
            CAPTURE(t);
            CHECK_FALSE(validate(mutated(b, s, true, 0, t, Wait{}), s).ok());
            ++tried;
        }
        const auto& r = b.rechargers[0].actions[static_cast<std::size_t>(t)];
        if (std::holds_alternative<MotionPrimitive>(r)) {
            CAPTURE(t);
            CHECK_FALSE(validate(mutated(b, s, false, 0, t, Wait{}), s).ok());
            ++tried;
        }
    }
    CHECK(tried >= 8);
}

TEST_CASE("efficiency arithmetic") {
    CHECK(efficiency_percent(2, 30, 6) == doctest::Approx(90.0));
    CHECK(efficiency_percent(3, 17, 0) == doctest::Approx(100.0));
    CHECK(slot_percent(50, 2, 35) == doctest::Approx(71.43).epsilon(1e-3));
    CHECK(slot_percent(10, 2, 35) == doctest::Approx(14.29).epsilon(1e-3));
    CHECK(efficiency_percent(2, 35, 10) == doctest::Approx(slot_percent(60, 2, 35)));
    CHECK_THROWS_AS(efficiency_percent(0, 10, 0), DomainError);
    CHECK_THROWS_AS(efficiency_percent(1, 10, 11), DomainError);
}

TEST_CASE("efficiency report counts actions") {
    const auto s = tiny_fixture();
    const auto b = plan_greedy(s);
    const auto e = efficiency(b, s);
    std::int64_t waits = 0;
    for (const auto& a : b.workers[0].actions) waits += std::holds_alternative<Wait>(a);
    CHECK(e.W == waits);
    const auto& w = e.workers[0];
    CHECK(w.work + w.recharge + w.wait == b.T_prime - 1);
    CHECK(e.E == doctest::Approx(efficiency_percent(1, b.T_prime, e.W)));
    CHECK(e.T == s.horizon);
    const auto j = nlohmann::json::parse(efficiency_to_json(e));
    CHECK(j["W"] == e.W);
}

TEST_CASE("replay: valid bundles repeat") {
    for (const auto& name : {"tiny", "warehouse"}) {
        const auto s = fixture_by_name(name);
        CHECK(replay_hypercycles(plan_greedy(s), s, 5).ok);
    }
    const auto s = tiny_fixture();
    CHECK_THROWS_AS(replay_hypercycles(plan_greedy(s), s, 0), DomainError);
}

TEST_CASE("replay: broken charge matching diverges at cycle 2 step 1") {
    const auto s = tiny_fixture();
    const auto b = plan_greedy(s);
    const auto bad = mutated(b, s, true, 0, b.events.back().step, Wait{});
    const auto r = replay_hypercycles(bad, s, 2);
    CHECK_FALSE(r.ok);
    CHECK(r.cycle == 2);
    CHECK(r.step == 1);
    CHECK(r.robot == "worker 0");
}

TEST_CASE("sync: zero delays reproduce the nominal makespan") {
    const auto s = tiny_fixture();
    const auto b = plan_greedy(s);
    const auto r = simulate_with_delays(b, s, DelayModel{}, 3);
    CHECK(r.completed);
    CHECK_FALSE(r.deadlock);
    CHECK(r.states_match);
    CHECK(r.sync_messages_per_cycle == 1);
    REQUIRE(r.makespan.size() == 3);
    for (double m : r.makespan) CHECK(m == doctest::Approx(b.T_prime - 1));
}

TEST_CASE("sync: a recharger late to a meeting holds the worker") {
    const auto s = tiny_fixture();
    const auto b = plan_greedy(s);
    const int te = first_event_step(b);
    REQUIRE(te >= 1);
    DelayModel dm;
    dm.offsets.resize(2);
    dm.offsets[1].assign(static_cast<std::size_t>(te), 0.0);
    dm.offsets[1][static_cast<std::size_t>(te - 1)] = 2.0;
    const auto r = simulate_with_delays(b, s, dm, 2);
    CHECK(r.completed);
    CHECK(r.states_match);
    REQUIRE(r.inflation.size() == 2);
    for (double x : r.inflation) CHECK(x == doctest::Approx(2.0));
}

TEST_CASE("sync: seeded jitter completes every cycle") {
    const auto s = fixture_by_name("warehouse");
    const auto b = plan_greedy(s);
    DelayModel dm;
    dm.jitter_max = 3.0;
    dm.seed = 42;
    const auto r = simulate_with_delays(b, s, dm, 10);
    CHECK(r.completed);
    CHECK_FALSE(r.deadlock);
    CHECK(r.states_match);
    CHECK(r.sync_messages_per_cycle == 2);
    for (double x : r.inflation) CHECK(x >= 0.0);
    // same seed, same delays
    CHECK(simulate_with_delays(b, s, dm, 10).makespan == r.makespan);
}

TEST_CASE("validation report serializes") {
    const auto s = tiny_fixture();
    auto b = plan_greedy(s);
    b.events.clear();
    const auto j = nlohmann::json::parse(validation_to_json(validate(b, s)));
    CHECK(j["ok"] == false);
    CHECK(j["violations"].size() >= 1);
    CHECK(j["violations"][0].contains("clause"));
}
