#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mrp/workspace.hpp"

namespace mrp {

// Energy in scaled integer units (see Scenario::energy_scale).
using Energy = std::int64_t;

// Velocity configuration id. 0 is the stationary configuration v0.
struct VelocityConfig {
    int id = 0;
    friend constexpr auto operator<=>(const VelocityConfig&, const VelocityConfig&) = default;
};
inline constexpr VelocityConfig kStationary{0};

struct RobotState {
    Cell p;
    VelocityConfig v = kStationary;
    Energy e = 0;
    friend constexpr bool operator==(const RobotState&, const RobotState&) = default;
};

struct MotionPrimitive {
    std::string name;
    Cell disp;
    Energy cost = 0;
    // Cells traversed relative to the start cell, (0,0) first and disp last.
    std::vector<Cell> intermediate;
    VelocityConfig v_from = kStationary;
    VelocityConfig v_to = kStationary;

    // Builds a straight unit move with the two endpoint cells as its footprint.
    static MotionPrimitive unit(std::string name, Cell disp, Energy cost);

    bool stationary_only() const noexcept { return v_from == kStationary && v_to == kStationary; }
    // Throws DomainError when intermediate does not start at (0,0) and end at disp,
    // or when the cost is negative.
    void check() const;

    friend bool operator==(const MotionPrimitive&, const MotionPrimitive&) = default;
};

struct Wait {
    friend constexpr bool operator==(Wait, Wait) = default;
};

struct Recharge {
    Energy delta = 0;
    friend constexpr bool operator==(Recharge, Recharge) = default;
};

using Primitive = std::variant<MotionPrimitive, Wait, Recharge>;

// 4-connected unit moves named E, W, S, N (S is +y, rows grow downwards).
std::vector<MotionPrimitive> four_connected_primitives(Energy cost = 1);

// Footprints of a primitive set, for the breadth-first queries in workspace.hpp.
std::vector<StepShape> step_shapes(std::span<const MotionPrimitive> prims);

// Cells swept when applying `prim` at `from`.
std::vector<Cell> swept_cells(Cell from, const MotionPrimitive& prim);

// Applies a primitive. Recharge adjacency is the caller's responsibility.
// Throws KinematicsError naming the failed clause ("velocity precondition",
// "energy underflow", "recharge at full charge", "overcharge",
// "recharge amount out of range").
RobotState apply(const RobotState& s, const Primitive& prim, Energy emax, Energy delta_max);

// ceil((emax - e) / delta_max). Throws DomainError unless delta_max > 0 and 0 <= e <= emax.
int recharge_steps_needed(Energy e, Energy emax, Energy delta_max);

class WorkingLoop {
public:
    WorkingLoop() = default;
    // `points` is the closed sequence, last == first; moves[k] takes points[k] to points[k+1].
    // Throws DomainError on a malformed loop.
    WorkingLoop(std::vector<Cell> points, std::vector<MotionPrimitive> moves);

    // Number of moves (== distinct points) in one traversal.
    int size() const noexcept { return static_cast<int>(moves_.size()); }
    // k is 0-based here; point(size()) == point(0).
    Cell point(int k) const { return points_[static_cast<std::size_t>(k)]; }
    const MotionPrimitive& move(int k) const { return moves_[static_cast<std::size_t>(k)]; }
    const std::vector<Cell>& points() const noexcept { return points_; }
    const std::vector<MotionPrimitive>& moves() const noexcept { return moves_; }
    Cell home() const { return points_.front(); }
    Energy cost() const;
    // Distinct cells occupied while traversing the loop, including swept cells.
    std::vector<Cell> cells() const;

    friend bool operator==(const WorkingLoop&, const WorkingLoop&) = default;

private:
    std::vector<Cell> points_;
    std::vector<MotionPrimitive> moves_;
};

// 1-based position on a working loop.
struct LoopCursor {
    int index = 1;
    friend constexpr bool operator==(LoopCursor, LoopCursor) = default;
};

// Motion advances the cursor (wrapping to 1); wait and recharge leave it alone.
// Throws KinematicsError("loop order") when the motion differs from the loop's
// expected primitive at the cursor.
LoopCursor advance_cursor(LoopCursor c, const Primitive& prim, const WorkingLoop& loop);

std::string describe(const Primitive& p);

}  // namespace mrp
