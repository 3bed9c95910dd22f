// Randomized checks of the small formulas against independent computations.
#include <random>

#include "doctest.h"
#include "mrp/executor.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/greedy.hpp"
#include "mrp/kinematics.hpp"
#include "generators.hpp"
#include "oracle.hpp"

using namespace mrp;

using oracle::draw;
using oracle::random_loop_scenario;

TEST_CASE("efficiency equals the exact ratio") {
    std::mt19937_64 rng(101);
    for (int k = 0; k < 2000; ++k) {
        const int nw = draw(rng, 1, 12), T = draw(rng, 1, 400);
        const std::int64_t slots = static_cast<std::int64_t>(nw) * T;
        const std::int64_t W = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(slots + 1));
        const double E = efficiency_percent(nw, T, W);
        CHECK(E * static_cast<double>(slots) == doctest::Approx(static_cast<double>((slots - W) * 100)).epsilon(1e-12));
        CHECK(E >= 0.0);
        CHECK(E <= 100.0);
        if (W < slots) CHECK(efficiency_percent(nw, T, W + 1) < E);
    }
}

TEST_CASE("recharge_steps_needed equals step-by-step refilling") {
    std::mt19937_64 rng(202);
    for (int k = 0; k < 2000; ++k) {
        const Energy emax = draw(rng, 1, 500), dmax = draw(rng, 1, 60);
        const Energy e = static_cast<Energy>(rng() % static_cast<std::uint64_t>(emax + 1));
        int steps = 0;
        for (Energy x = e; x < emax; x += dmax) ++steps;
        CHECK(recharge_steps_needed(e, emax, dmax) == steps);
    }
}

TEST_CASE("lambda of a depleted worker equals BFS to its ring") {
    std::mt19937_64 rng(303);
    int checked = 0;
    for (int k = 0; k < 1500; ++k) {
        const auto s = random_loop_scenario(rng);
        auto g = initial_greedy_state(s);
        const auto& L = s.workers[0].loop;
        const int cur = draw(rng, 0, L.size() - 1);
        g.workers[0].cursor = cur;
        g.workers[0].state = {L.point(cur), kStationary, 0};
        g.workers[0].stationary = true;
        const int want = oracle::bfs_distance(s.workspace, g.rechargers[0].cell, oracle::ring(s.workspace, L.point(cur)));
        const auto got = lambda(s, g, 0, 0);
        CHECK(got.value_or(-1) == want);
        ++checked;
    }
    CHECK(checked >= 1000);
}

TEST_CASE("lambda of a moving worker is max(moves to depletion, BFS)") {
    std::mt19937_64 rng(404);
    for (int k = 0; k < 1500; ++k) {
        const auto s = random_loop_scenario(rng);
        auto g = initial_greedy_state(s);
        const auto& L = s.workers[0].loop;
        const int m = L.size();
        g.step = draw(rng, 0, s.horizon - 1);
        const int cur = draw(rng, 0, m - 1);
        const Energy e = draw(rng, 0, static_cast<int>(s.workers[0].emax));
        g.workers[0].cursor = cur;
        g.workers[0].state = {L.point(cur), kStationary, e};

        const int planned = oracle::planned_moves(cur, m, s.horizon - 1 - g.step);
        const int moves = static_cast<int>(std::min<Energy>(planned, e));  // unit costs
        const Cell stop = L.point((cur + moves) % m);
        const int travel = oracle::bfs_distance(s.workspace, g.rechargers[0].cell, oracle::ring(s.workspace, stop));
        const auto got = lambda(s, g, 0, 0);
        if (travel < 0) {
            CHECK_FALSE(got.has_value());
        } else {
            CHECK(got.value_or(-1) == std::max(moves, travel));
        }
    }
}
