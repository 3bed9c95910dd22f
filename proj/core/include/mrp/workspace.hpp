#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mrp {

// Grid cell, x = column, y = row, origin at the top-left corner.
struct Cell {
    int x = 0;
    int y = 0;

    friend constexpr auto operator<=>(const Cell&, const Cell&) = default;
    friend constexpr Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }
};

std::string to_string(Cell c);

// Chebyshev (king-move) distance.
int chebyshev(Cell a, Cell b);

// Displacement with the cells a primitive sweeps through, relative to the
// cell where it is applied. Used by the breadth-first queries below so this
// header does not depend on the kinematics module.
struct StepShape {
    Cell disp;
    std::vector<Cell> swept;  // includes (0,0) and disp
};

// Unit moves in the four cardinal directions.
std::vector<StepShape> four_connected_steps();

// Occupancy grid. Immutable after construction.
class Workspace {
public:
    Workspace() = default;
    // Throws DomainError if an obstacle lies outside the grid or no free cell remains.
    Workspace(int width, int height, std::vector<Cell> obstacles = {});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int cell_count() const noexcept { return width_ * height_; }

    bool in_bounds(Cell c) const noexcept {
        return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_;
    }
    bool is_obstacle(Cell c) const;
    // In bounds and not an obstacle.
    bool is_free(Cell c) const noexcept {
        return in_bounds(c) && !blocked_[static_cast<std::size_t>(id(c))];
    }

    // Row-major id, y * width + x.
    int id(Cell c) const noexcept { return c.y * width_ + c.x; }
    Cell cell(int id) const noexcept { return {id % width_, id / width_}; }

    std::vector<Cell> obstacles() const;
    std::vector<Cell> free_cells() const;
    std::size_t free_count() const noexcept { return free_count_; }

    // Free cells within Chebyshev distance 1 of p, p itself included when free.
    // Throws DomainError when p is out of bounds.
    std::vector<Cell> neighborhood(Cell p) const;

    // Breadth-first distance field from a set of sources over the given step
    // shapes. Every swept cell must be free. Unreached cells hold -1.
    std::vector<int> distance_field(std::span<const Cell> sources,
                                    std::span<const StepShape> steps) const;

    // Same, but cells for which `blocked` returns true are treated as obstacles.
    std::vector<int> distance_field(std::span<const Cell> sources,
                                    std::span<const StepShape> steps,
                                    const std::function<bool(Cell)>& blocked) const;

    friend bool operator==(const Workspace&, const Workspace&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<bool> blocked_;
    std::size_t free_count_ = 0;
};

// Minimum number of steps from `from` to any cell of `to_any`, or nullopt when
// no cell of `to_any` is reachable.
std::optional<int> shortest_travel_time(const Workspace& w, Cell from,
                                        std::span<const Cell> to_any,
                                        std::span<const StepShape> steps);

// One shortest path (inclusive of both ends) from `from` to the nearest cell
// of `to_any`. Empty when unreachable.
std::vector<Cell> shortest_path(const Workspace& w, Cell from, std::span<const Cell> to_any,
                                std::span<const StepShape> steps,
                                const std::function<bool(Cell)>& blocked = {});

// Grid map text format: "width height" on the first line followed by
// `height` rows of `width` glyphs, '#' obstacle and '.' free.
Workspace parse_grid_map(std::string_view text);
std::string format_grid_map(const Workspace& w);

}  // namespace mrp

template <>
struct std::hash<mrp::Cell> {
    std::size_t operator()(const mrp::Cell& c) const noexcept {
        return std::hash<std::int64_t>{}((static_cast<std::int64_t>(c.x) << 32) ^
                                         static_cast<std::uint32_t>(c.y));
    }
};
