#include "generators.hpp"

#include <algorithm>

#include "mrp/fixtures.hpp"

namespace oracle {

int draw(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

mrp::Scenario random_loop_scenario(std::mt19937_64& rng) {
    using mrp::Cell;
    const int w = draw(rng, 5, 12), h = draw(rng, 5, 12);
    const int lw = draw(rng, 2, std::min(4, w - 2)), lh = draw(rng, 2, std::min(4, h - 2));
    const Cell corner{draw(rng, 0, w - lw), draw(rng, 0, h - lh)};
    std::vector<Cell> obs;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const bool on_rect = x >= corner.x && x < corner.x + lw && y >= corner.y && y < corner.y + lh;
            if (!on_rect && rng() % 4 == 0) obs.push_back({x, y});
        }
    mrp::Scenario s = mrp::tiny_fixture();
    s.workspace = mrp::Workspace(w, h, obs);
    s.workers[0].loop = mrp::rectangle_loop(corner, lw, lh, s.workers[0].primitives);
    s.workers[0].emax = s.workers[0].loop.cost() + draw(rng, 0, 10);
    s.horizon = draw(rng, 2, 40);
    std::vector<Cell> off;
    const auto cells = s.workers[0].loop.cells();
    for (Cell c : s.workspace.free_cells())
        if (std::find(cells.begin(), cells.end(), c) == cells.end()) off.push_back(c);
    s.potential_starts = {off[rng() % off.size()]};
    return s;
}

int planned_moves(int cursor, int loop_size, int left) {
    int planned = cursor == 0 ? 0 : loop_size - cursor;
    while (left - planned >= loop_size) planned += loop_size;
    return planned;
}

}  // namespace oracle
