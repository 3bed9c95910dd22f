#include "mrp/fixtures.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <set>

#include "mrp/error.hpp"

namespace mrp {

namespace {

const MotionPrimitive& pick(const std::vector<MotionPrimitive>& prims, Cell disp) {
    for (const auto& p : prims)
        if (p.disp == disp) return p;
    throw DomainError("primitive set has no move " + to_string(disp));
}

// Fills the derived pieces shared by every fixture.
Scenario finish(Scenario s, std::vector<WorkingLoop> loops, std::vector<Energy> emax,
                const std::string& worker_set, int rechargers) {
    for (std::size_t i = 0; i < loops.size(); ++i)
        s.workers.push_back({static_cast<int>(i), std::move(loops[i]), emax[i], worker_set,
                             s.primitive_sets.at(worker_set)});
    for (int j = 0; j < rechargers; ++j)
        s.rechargers.push_back({j, "unit4", s.primitive_sets.at("unit4")});
    validate_scenario(s);
    return s;
}

// Deterministic across standard libraries, unlike the std distributions.
int draw(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

// 4-connected component of `from`; cells outside are returned as false.
std::vector<char> component(const Workspace& w, Cell from) {
    std::vector<char> seen(static_cast<std::size_t>(w.cell_count()), 0);
    if (!w.is_free(from)) return seen;
    std::vector<Cell> stack{from};
    seen[static_cast<std::size_t>(w.id(from))] = 1;
    while (!stack.empty()) {
        Cell c = stack.back();
        stack.pop_back();
        for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}}) {
            Cell n = c + d;
            if (w.is_free(n) && !seen[static_cast<std::size_t>(w.id(n))]) {
                seen[static_cast<std::size_t>(w.id(n))] = 1;
                stack.push_back(n);
            }
        }
    }
    return seen;
}

struct RandomLayout {
    Workspace workspace;
    std::vector<WorkingLoop> loops;
};

// Loops first (kept one cell apart), then obstacles away from their
// neighborhoods; free cells cut off from the first loop are filled in.
std::optional<RandomLayout> random_layout(std::mt19937_64& rng, int W, int H, int workers,
                                          int obstacle_percent,
                                          const std::vector<MotionPrimitive>& prims,
                                          const std::vector<std::pair<int, int>>& sizes) {
    Workspace empty(W, H, {});
    std::vector<WorkingLoop> loops;
    std::set<Cell> reserved;  // loop cells plus margin
    std::set<Cell> loop_cells;
    for (int i = 0; i < workers; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
            auto [w, h] = sizes[static_cast<std::size_t>(draw(rng, 0, static_cast<int>(sizes.size()) - 1))];
            Cell corner{draw(rng, 0, W - w), draw(rng, 0, H - h)};
            WorkingLoop loop = rectangle_loop(corner, w, h, prims);
            auto cells = loop.cells();
            if (std::any_of(cells.begin(), cells.end(), [&](Cell c) { return reserved.count(c) > 0; }))
                continue;
            for (Cell c : cells) {
                loop_cells.insert(c);
                for (Cell n : empty.neighborhood(c)) reserved.insert(n);
            }
            loops.push_back(std::move(loop));
            placed = true;
        }
        if (!placed) return std::nullopt;
    }
    std::vector<Cell> obstacles;
    const int target = W * H * obstacle_percent / 100;
    std::vector<Cell> candidates;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
            if (!reserved.count({x, y})) candidates.push_back({x, y});
    for (int n = 0; n < target && !candidates.empty(); ++n) {
        const int k = draw(rng, 0, static_cast<int>(candidates.size()) - 1);
        obstacles.push_back(candidates[static_cast<std::size_t>(k)]);
        candidates.erase(candidates.begin() + k);
    }
    Workspace ws(W, H, obstacles);
    const auto reach = component(ws, loops.front().home());
    for (const auto& loop : loops)
        for (Cell c : loop.cells())
            if (!reach[static_cast<std::size_t>(ws.id(c))]) return std::nullopt;
    for (Cell c : ws.free_cells())
        if (!reach[static_cast<std::size_t>(ws.id(c))]) obstacles.push_back(c);
    return RandomLayout{Workspace(W, H, obstacles), std::move(loops)};
}

std::vector<Cell> cells_off_loops(const Workspace& w, const std::vector<WorkingLoop>& loops) {
    std::set<Cell> on;
    for (const auto& l : loops)
        for (Cell c : l.cells()) on.insert(c);
    std::vector<Cell> out;
    for (Cell c : w.free_cells())
        if (!on.count(c)) out.push_back(c);
    return out;
}

Scenario base(std::string name, Workspace w, int T, Energy delta_max, Energy worker_cost) {
    Scenario s;
    s.name = std::move(name);
    s.workspace = std::move(w);
    s.delta_max = delta_max;
    s.horizon = T;
    s.primitive_sets["unit4"] = four_connected_primitives(1);
    if (worker_cost != 1) s.primitive_sets["worker"] = four_connected_primitives(worker_cost);
    return s;
}

}  // namespace

WorkingLoop rectangle_loop(Cell corner, int w, int h, const std::vector<MotionPrimitive>& prims) {
    if (w < 2 || h < 2) throw DomainError("rectangle loop needs at least 2x2 cells");
    std::vector<Cell> pts{corner};
    std::vector<MotionPrimitive> moves;
    auto run = [&](Cell d, int n) {
        for (int k = 0; k < n; ++k) {
            moves.push_back(pick(prims, d));
            pts.push_back(pts.back() + d);
        }
    };
    run({1, 0}, w - 1);
    run({0, 1}, h - 1);
    run({-1, 0}, w - 1);
    run({0, -1}, h - 1);
    return WorkingLoop(std::move(pts), std::move(moves));
}

Scenario tiny_fixture() {
    Scenario s = base("tiny", Workspace(5, 5, {}), 12, 10, 1);
    s.potential_starts = {{0, 0}};
    auto loop = rectangle_loop({1, 1}, 3, 3, s.primitive_sets.at("unit4"));
    return finish(std::move(s), {std::move(loop)}, {10}, "unit4", 1);
}

Scenario warehouse_fixture(int workers, int rechargers, int T, int starts) {
    if (workers < 1 || workers > 4) throw DomainError("warehouse fixture holds 1 to 4 workers");
    if (starts < 0 || starts > 16) throw DomainError("warehouse fixture has 16 potential starts");
    std::vector<Cell> obstacles;
    for (int y : {3, 8, 13})
        for (int x = 2; x <= 16; ++x)
            if (x <= 7 || x >= 11) obstacles.push_back({x, y});
    Scenario s = base("warehouse", Workspace(19, 19, obstacles), T, 10, 2);
    const auto& prims = s.primitive_sets.at("worker");
    const std::vector<Cell> corners{{3, 4}, {12, 4}, {3, 10}, {12, 10}};
    std::vector<WorkingLoop> loops;
    std::vector<Energy> emax;
    for (int i = 0; i < workers; ++i) {
        loops.push_back(rectangle_loop(corners[static_cast<std::size_t>(i)], 3, 2, prims));
        emax.push_back(i % 2 == 0 ? 20 : 24);
    }
    const std::vector<Cell> P{{1, 1},  {9, 1},  {17, 1}, {1, 9},  {17, 9}, {1, 17}, {9, 17}, {17, 17},
                              {9, 5},  {9, 11}, {5, 1},  {13, 1}, {5, 17}, {13, 17}, {1, 5}, {17, 13}};
    s.potential_starts.assign(P.begin(), P.begin() + starts);
    return finish(std::move(s), std::move(loops), std::move(emax), "worker", rechargers);
}

Scenario artificial_floor_fixture(int T) {
    std::vector<Cell> obstacles;
    for (int k = 0; k < 19; ++k) {
        if (k != 4 && k != 9 && k != 14) obstacles.push_back({k, 9});
        if (k != 4 && k != 9 && k != 14) obstacles.push_back({9, k});
    }
    Scenario s = base("artificial-floor", Workspace(19, 19, obstacles), T, 10, 2);
    const auto& prims = s.primitive_sets.at("worker");
    std::vector<WorkingLoop> loops;
    for (Cell c : {Cell{3, 3}, Cell{13, 3}, Cell{3, 13}, Cell{13, 13}}) loops.push_back(rectangle_loop(c, 3, 3, prims));
    s.potential_starts = {{1, 1}, {17, 1}, {1, 17}, {17, 17}, {7, 7}, {11, 7}, {7, 11}, {11, 11}};
    return finish(std::move(s), std::move(loops), {20, 24, 20, 24}, "worker", 2);
}

Scenario random_fixture(int obstacle_percent, std::uint64_t seed, int workers, int rechargers, int T) {
    if (obstacle_percent < 0 || obstacle_percent > 60) throw DomainError("obstacle percentage out of range");
    std::mt19937_64 rng(seed);
    const auto prims = four_connected_primitives(2);
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto layout = random_layout(rng, 19, 19, workers, obstacle_percent, prims, {{3, 2}, {2, 3}, {3, 3}});
        if (!layout) continue;
        Scenario s = base("random-" + std::to_string(obstacle_percent), layout->workspace, T, 10, 2);
        s.potential_starts = cells_off_loops(s.workspace, layout->loops);
        std::vector<Energy> emax;
        for (int i = 0; i < workers; ++i) emax.push_back(i % 2 == 0 ? 20 : 24);
        return finish(std::move(s), std::move(layout->loops), std::move(emax), "worker", rechargers);
    }
    throw PlanningError("could not place a random layout");
}

Scenario small_random_scenario(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto prims = four_connected_primitives(1);
    for (;;) {
        const int W = draw(rng, 6, 9), H = draw(rng, 6, 9);
        const int workers = draw(rng, 1, 3), rechargers = draw(rng, 1, 2);
        auto layout = random_layout(rng, W, H, workers, draw(rng, 0, 8), prims, {{2, 2}, {3, 2}, {2, 3}});
        if (!layout) continue;
        Scenario s = base("small-random-" + std::to_string(seed), layout->workspace, draw(rng, 12, 20),
                          draw(rng, 2, 5), 1);
        auto free = cells_off_loops(s.workspace, layout->loops);
        const int np = std::min<int>(static_cast<int>(free.size()), rechargers + draw(rng, 0, 2));
        for (int k = 0; k < np; ++k) {
            const int at = draw(rng, 0, static_cast<int>(free.size()) - 1);
            s.potential_starts.push_back(free[static_cast<std::size_t>(at)]);
            free.erase(free.begin() + at);
        }
        std::vector<Energy> emax;
        for (const auto& l : layout->loops) emax.push_back(l.cost() + draw(rng, 0, 4));
        return finish(std::move(s), std::move(layout->loops), std::move(emax), "unit4", rechargers);
    }
}

Scenario tiny_random_scenario(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto prims = four_connected_primitives(1);
    for (;;) {
        const int W = draw(rng, 4, 5), H = draw(rng, 4, 5);
        const int workers = draw(rng, 1, 2);
        auto layout = random_layout(rng, W, H, workers, 0, prims, {{2, 2}, {3, 2}, {2, 3}});
        if (!layout) continue;
        Scenario s = base("tiny-random-" + std::to_string(seed), layout->workspace, draw(rng, 8, 12),
                          draw(rng, 1, 3), 1);
        auto free = cells_off_loops(s.workspace, layout->loops);
        if (free.empty()) continue;
        s.potential_starts = {free[static_cast<std::size_t>(draw(rng, 0, static_cast<int>(free.size()) - 1))]};
        std::vector<Energy> emax;
        for (const auto& l : layout->loops) emax.push_back(l.cost() + draw(rng, 0, 2));
        return finish(std::move(s), std::move(layout->loops), std::move(emax), "unit4", 1);
    }
}

std::vector<std::string> fixture_names() {
    return {"tiny", "warehouse", "artificial-floor", "random-20", "random-30"};
}

Scenario fixture_by_name(const std::string& name, std::uint64_t seed) {
    if (name == "tiny") return tiny_fixture();
    if (name == "warehouse") return warehouse_fixture();
    if (name == "artificial-floor") return artificial_floor_fixture();
    if (name == "random-20") return random_fixture(20, seed);
    if (name == "random-30") return random_fixture(30, seed);
    throw DomainError("unknown fixture '" + name + "'");
}

}  // namespace mrp
