#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrp/scenario.hpp"

namespace mrp {

// Closed clockwise rectangle starting at `corner` with `w` x `h` cells per side
// (2(w-1) + 2(h-1) moves), using the E/S/W/N moves of `prims`.
WorkingLoop rectangle_loop(Cell corner, int w, int h, const std::vector<MotionPrimitive>& prims);

// 5x5 empty grid, one 8-move square loop, one recharger, P = {(0,0)}, T = 12.
Scenario tiny_fixture();

// 19x19 aisle layout. Up to 4 workers on 3x2 loops between the shelf rows,
// half depleting in 10 moves and half in 12. P holds up to 16 border and aisle
// cells; `starts` keeps the first entries, which remove cells symmetrically.
Scenario warehouse_fixture(int workers = 4, int rechargers = 2, int T = 35, int starts = 16);

// 19x19 floor with walled rooms and doorways, 4 workers, 2 rechargers.
Scenario artificial_floor_fixture(int T = 35);

// 19x19 grid with about `obstacle_percent` percent random obstacles. Loops are
// placed on free rectangles; P is every free cell off the loops' neighborhoods
// reachable from the first loop. Deterministic in `seed`.
Scenario random_fixture(int obstacle_percent, std::uint64_t seed, int workers = 4, int rechargers = 2,
                        int T = 35);

// Small randomized scenario: grid <= 9x9, 1-3 workers, 1-2 rechargers, T <= 20.
Scenario small_random_scenario(std::uint64_t seed);

// Tiny oracle-sized scenario: grid <= 5x5, 1-2 workers, 1 recharger, T <= 12.
Scenario tiny_random_scenario(std::uint64_t seed);

// "tiny", "warehouse", "artificial-floor", "random-20", "random-30".
std::vector<std::string> fixture_names();
Scenario fixture_by_name(const std::string& name, std::uint64_t seed = 1);

}  // namespace mrp
