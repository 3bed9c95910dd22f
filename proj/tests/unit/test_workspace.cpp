#include <algorithm>
#include <random>

#include "doctest.h"
#include "mrp/error.hpp"
#include "mrp/workspace.hpp"
#include "oracle.hpp"

using namespace mrp;

namespace {

std::vector<Cell> sorted(std::vector<Cell> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<Cell> block(int x0, int x1, int y0, int y1) {
    std::vector<Cell> v;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) v.push_back({x, y});
    return sorted(v);
}

}  // namespace

TEST_CASE("neighborhood of an interior cell is the 3x3 block") {
    Workspace w(5, 5);
    CHECK(sorted(w.neighborhood({2, 2})) == block(1, 3, 1, 3));
}

TEST_CASE("neighborhood clips at the corner") {
    Workspace w(5, 5);
    CHECK(sorted(w.neighborhood({0, 0})) == block(0, 1, 0, 1));
}

TEST_CASE("neighborhood drops obstacles") {
    Workspace w(3, 3, {{1, 2}});
    auto expect = block(0, 2, 0, 2);
    expect.erase(std::find(expect.begin(), expect.end(), Cell{1, 2}));
    CHECK(sorted(w.neighborhood({1, 1})) == expect);
}

TEST_CASE("neighborhood out of bounds is a domain error") {
    Workspace w(5, 5);
    CHECK_THROWS_AS(w.neighborhood({5, 0}), DomainError);
    CHECK_THROWS_AS(w.neighborhood({-1, 2}), DomainError);
}

TEST_CASE("workspace rejects bad obstacles and full grids") {
    CHECK_THROWS_AS(Workspace(3, 3, {{3, 0}}), DomainError);
    CHECK_THROWS_AS(Workspace(1, 1, {{0, 0}}), DomainError);
}

TEST_CASE("shortest travel time examples") {
    const auto steps = four_connected_steps();
    Workspace w(5, 5);
    std::vector<Cell> to{{1, 2}};
    CHECK(shortest_travel_time(w, {0, 2}, to, steps) == 1);
    std::vector<Cell> self{{0, 0}};
    CHECK(shortest_travel_time(w, {0, 0}, self, steps) == 0);

    // wall at x=2 with a single gap at (2,4)
    Workspace walled(5, 5, {{2, 0}, {2, 1}, {2, 2}, {2, 3}});
    std::vector<Cell> far{{4, 0}};
    CHECK(shortest_travel_time(walled, {0, 0}, far, steps) == 12);
    CHECK(oracle::bfs_distance(walled, {0, 0}, far) == 12);
}

TEST_CASE("unreachable target reports nullopt") {
    const auto steps = four_connected_steps();
    Workspace w(5, 5, {{2, 0}, {2, 1}, {2, 2}, {2, 3}, {2, 4}});
    std::vector<Cell> to{{4, 4}};
    CHECK_FALSE(shortest_travel_time(w, {0, 0}, to, steps).has_value());
    CHECK(shortest_path(w, {0, 0}, to, steps).empty());
}

TEST_CASE("shortest path is consistent with the travel time") {
    const auto steps = four_connected_steps();
    Workspace w(6, 6, {{1, 1}, {2, 1}, {3, 1}, {3, 2}, {3, 3}});
    std::vector<Cell> to{{4, 2}};
    const auto path = shortest_path(w, {0, 3}, to, steps);
    REQUIRE(!path.empty());
    CHECK(path.front() == Cell{0, 3});
    CHECK(path.back() == Cell{4, 2});
    CHECK(static_cast<int>(path.size()) - 1 == *shortest_travel_time(w, {0, 3}, to, steps));
    for (std::size_t k = 1; k < path.size(); ++k) {
        CHECK(w.is_free(path[k]));
        CHECK(std::abs(path[k].x - path[k - 1].x) + std::abs(path[k].y - path[k - 1].y) == 1);
    }
}

TEST_CASE("travel time matches the BFS oracle and is symmetric on random grids") {
    const auto steps = four_connected_steps();
    std::mt19937_64 rng(7);
    for (int round = 0; round < 200; ++round) {
        const int wd = 3 + static_cast<int>(rng() % 8), ht = 3 + static_cast<int>(rng() % 8);
        std::vector<Cell> obs;
        for (int y = 0; y < ht; ++y)
            for (int x = 0; x < wd; ++x)
                if (rng() % 4 == 0) obs.push_back({x, y});
        if (static_cast<int>(obs.size()) >= wd * ht) continue;
        Workspace w(wd, ht, obs);
        const auto free = w.free_cells();
        const Cell a = free[rng() % free.size()], b = free[rng() % free.size()];
        std::vector<Cell> ta{a}, tb{b};
        const auto ab = shortest_travel_time(w, a, tb, steps);
        const auto ba = shortest_travel_time(w, b, ta, steps);
        const int want = oracle::bfs_distance(w, a, tb);
        CHECK(ab.value_or(-1) == want);
        CHECK(ab == ba);
        CHECK(shortest_travel_time(w, a, ta, steps) == 0);
        for (Cell n : w.neighborhood(a)) {
            CHECK(w.is_free(n));
            CHECK(chebyshev(n, a) <= 1);
        }
    }
}

TEST_CASE("grid map text round trips") {
    const std::string text = "4 3\n..#.\n....\n#...\n";
    const auto w = parse_grid_map(text);
    CHECK(w.width() == 4);
    CHECK(w.height() == 3);
    CHECK(w.is_obstacle({2, 0}));
    CHECK(w.is_obstacle({0, 2}));
    CHECK(w.free_count() == 10);
    CHECK(format_grid_map(w) == text);
    CHECK(parse_grid_map(format_grid_map(w)) == w);
}

TEST_CASE("grid map parsing is strict") {
    CHECK_THROWS_AS(parse_grid_map("2 2\n.x\n..\n"), ParseError);
    CHECK_THROWS_AS(parse_grid_map("2 2\n..\n"), ParseError);
    CHECK_THROWS_AS(parse_grid_map("2 2\n...\n..\n"), ParseError);
    CHECK_THROWS_AS(parse_grid_map("two 2\n..\n..\n"), ParseError);
}

TEST_CASE("cell ids are row-major") {
    Workspace w(7, 4);
    CHECK(w.id({3, 2}) == 17);
    CHECK(w.cell(17) == Cell{3, 2});
}
