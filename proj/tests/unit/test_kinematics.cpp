#include <random>

#include "doctest.h"
#include "mrp/error.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/kinematics.hpp"

using namespace mrp;

namespace {

std::string clause_of(const RobotState& s, const Primitive& p, Energy emax, Energy dmax) {
    try {
        apply(s, p, emax, dmax);
    } catch (const KinematicsError& e) {
        return e.clause();
    }
    return "";
}

WorkingLoop square3() { return rectangle_loop({1, 1}, 3, 3, four_connected_primitives()); }

}  // namespace

TEST_CASE("apply: motion shifts the cell and pays the cost") {
    const RobotState s{{1, 1}, kStationary, 5};
    const auto r = apply(s, MotionPrimitive::unit("E", {1, 0}, 1), 10, 10);
    CHECK(r == RobotState{{2, 1}, kStationary, 4});
}

TEST_CASE("apply: wait is the identity") {
    const RobotState s{{1, 1}, kStationary, 5};
    CHECK(apply(s, Wait{}, 10, 10) == s);
}

TEST_CASE("apply: overcharge is an error, not a clamp") {
    const RobotState s{{1, 1}, kStationary, 95};
    CHECK(clause_of(s, Recharge{10}, 100, 10) == "overcharge");
    CHECK(apply(s, Recharge{5}, 100, 10).e == 100);
}

TEST_CASE("apply: precondition clauses are named") {
    CHECK(clause_of({{0, 0}, kStationary, 0}, MotionPrimitive::unit("E", {1, 0}, 1), 10, 10) == "energy underflow");
    CHECK(clause_of({{0, 0}, kStationary, 10}, Recharge{1}, 10, 10) == "recharge at full charge");
    CHECK(clause_of({{0, 0}, kStationary, 3}, Recharge{0}, 10, 4) == "recharge amount out of range");
    CHECK(clause_of({{0, 0}, kStationary, 3}, Recharge{5}, 10, 4) == "recharge amount out of range");
    CHECK(clause_of({{0, 0}, VelocityConfig{1}, 3}, Wait{}, 10, 4) == "velocity precondition");
}

TEST_CASE("recharge_steps_needed examples") {
    CHECK(recharge_steps_needed(75, 100, 10) == 3);
    CHECK(recharge_steps_needed(100, 100, 10) == 0);
    CHECK(recharge_steps_needed(0, 100, 14) == 8);
    CHECK_THROWS_AS(recharge_steps_needed(5, 10, 0), DomainError);
    CHECK_THROWS_AS(recharge_steps_needed(11, 10, 3), DomainError);
    CHECK_THROWS_AS(recharge_steps_needed(-1, 10, 3), DomainError);
}

TEST_CASE("advance_cursor examples") {
    const auto L = square3();
    REQUIRE(L.size() == 8);
    CHECK(advance_cursor({3}, Wait{}, L).index == 3);
    CHECK(advance_cursor({3}, Recharge{2}, L).index == 3);
    CHECK(advance_cursor({8}, L.move(7), L).index == 1);
    CHECK(advance_cursor({2}, L.move(1), L).index == 3);
    try {
        advance_cursor({2}, L.move(4), L);
        FAIL("expected a loop order error");
    } catch (const KinematicsError& e) {
        CHECK(e.clause() == "loop order");
    }
}

TEST_CASE("following the loop moves returns home") {
    const auto L = square3();
    RobotState s{L.home(), kStationary, 100};
    LoopCursor c{1};
    for (int k = 0; k < L.size(); ++k) {
        const Primitive p = L.move(c.index - 1);
        s = apply(s, p, 100, 10);
        c = advance_cursor(c, p, L);
        CHECK(s.p == L.point(k + 1));
    }
    CHECK(s.p == L.home());
    CHECK(c.index == 1);
    CHECK(s.e == 100 - L.cost());
}

TEST_CASE("malformed loops are rejected") {
    const auto prims = four_connected_primitives();
    // not closed
    CHECK_THROWS_AS(WorkingLoop({{0, 0}, {1, 0}}, {prims[0]}), DomainError);
    // move does not land on the next point
    CHECK_THROWS_AS(WorkingLoop({{0, 0}, {1, 0}, {0, 0}}, {prims[0], prims[0]}), DomainError);
}

TEST_CASE("primitive footprints start at the origin and end at disp") {
    for (const auto& p : four_connected_primitives(2)) {
        CHECK(p.intermediate.front() == Cell{0, 0});
        CHECK(p.intermediate.back() == p.disp);
        CHECK(p.cost == 2);
        CHECK_NOTHROW(p.check());
    }
    MotionPrimitive bad = MotionPrimitive::unit("E", {1, 0}, 1);
    bad.intermediate = {{0, 0}, {0, 1}};
    CHECK_THROWS_AS(bad.check(), DomainError);
}

TEST_CASE("energy telescopes over random primitive sequences") {
    std::mt19937_64 rng(11);
    const auto prims = four_connected_primitives();
    for (int round = 0; round < 300; ++round) {
        const Energy emax = 5 + static_cast<Energy>(rng() % 20);
        const Energy dmax = 1 + static_cast<Energy>(rng() % 6);
        RobotState s{{0, 0}, kStationary, emax};
        Energy spent = 0, gained = 0;
        for (int k = 0; k < 40; ++k) {
            const int pick = static_cast<int>(rng() % 3);
            if (pick == 0 && s.e >= 1) {
                s = apply(s, prims[rng() % prims.size()], emax, dmax);
                spent += 1;
            } else if (pick == 1 && s.e < emax) {
                const Energy d = 1 + static_cast<Energy>(rng() % static_cast<std::uint64_t>(std::min(dmax, emax - s.e)));
                s = apply(s, Recharge{d}, emax, dmax);
                gained += d;
            } else {
                s = apply(s, Wait{}, emax, dmax);
            }
            REQUIRE(s.e >= 0);
            REQUIRE(s.e <= emax);
        }
        CHECK(s.e == emax - spent + gained);
    }
}
