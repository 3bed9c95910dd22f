#include "mrp/workspace.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <sstream>

#include "mrp/error.hpp"

namespace mrp {

ValidationError::ValidationError(std::vector<std::string> diagnostics)
    : Error([&] {
          std::string msg = "validation failed";
          for (const auto& d : diagnostics) msg += "\n  " + d;
          return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

BridgeError::BridgeError(const std::string& what, std::string output_excerpt)
    : Error(what + (output_excerpt.empty() ? "" : ": " + output_excerpt)),
      excerpt_(std::move(output_excerpt)) {}

std::string to_string(Cell c) {
    return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

int chebyshev(Cell a, Cell b) {
    return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

std::vector<StepShape> four_connected_steps() {
    std::vector<StepShape> steps;
    for (Cell d : {Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}})
        steps.push_back({d, {{0, 0}, d}});
    return steps;
}

Workspace::Workspace(int width, int height, std::vector<Cell> obstacles)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0)
        throw DomainError("workspace dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
    blocked_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), false);
    for (Cell o : obstacles) {
        if (!in_bounds(o)) throw DomainError("obstacle " + to_string(o) + " outside the grid");
        blocked_[static_cast<std::size_t>(id(o))] = true;
    }
    free_count_ = static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), false));
    if (free_count_ == 0) throw DomainError("workspace has no free cell");
}

bool Workspace::is_obstacle(Cell c) const {
    if (!in_bounds(c)) throw DomainError("cell " + to_string(c) + " out of bounds");
    return blocked_[static_cast<std::size_t>(id(c))];
}

std::vector<Cell> Workspace::obstacles() const {
    std::vector<Cell> out;
    for (int i = 0; i < cell_count(); ++i)
        if (blocked_[static_cast<std::size_t>(i)]) out.push_back(cell(i));
    return out;
}

std::vector<Cell> Workspace::free_cells() const {
    std::vector<Cell> out;
    out.reserve(free_count_);
    for (int i = 0; i < cell_count(); ++i)
        if (!blocked_[static_cast<std::size_t>(i)]) out.push_back(cell(i));
    return out;
}

std::vector<Cell> Workspace::neighborhood(Cell p) const {
    if (!in_bounds(p)) throw DomainError("neighborhood of out-of-bounds cell " + to_string(p));
    std::vector<Cell> out;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            Cell q{p.x + dx, p.y + dy};
            if (is_free(q)) out.push_back(q);
        }
    return out;
}

std::vector<int> Workspace::distance_field(std::span<const Cell> sources,
                                           std::span<const StepShape> steps) const {
    return distance_field(sources, steps, {});
}

std::vector<int> Workspace::distance_field(std::span<const Cell> sources,
                                           std::span<const StepShape> steps,
                                           const std::function<bool(Cell)>& blocked) const {
    auto passable = [&](Cell c) { return is_free(c) && !(blocked && blocked(c)); };
    std::vector<int> dist(static_cast<std::size_t>(cell_count()), -1);
    std::deque<Cell> queue;
    for (Cell s : sources) {
        if (!passable(s)) continue;
        auto& d = dist[static_cast<std::size_t>(id(s))];
        if (d == 0) continue;
        d = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        Cell c = queue.front();
        queue.pop_front();
        const int here = dist[static_cast<std::size_t>(id(c))];
        for (const auto& step : steps) {
            bool ok = true;
            for (Cell off : step.swept)
                if (!passable(c + off)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            Cell n = c + step.disp;
            auto& d = dist[static_cast<std::size_t>(id(n))];
            if (d >= 0) continue;
            d = here + 1;
            queue.push_back(n);
        }
    }
    return dist;
}

namespace {

// Step shapes reversed so a forward search from the targets yields
// distances *to* the targets for asymmetric primitive sets.
std::vector<StepShape> reversed(std::span<const StepShape> steps) {
    std::vector<StepShape> out;
    out.reserve(steps.size());
    for (const auto& s : steps) {
        StepShape r;
        r.disp = Cell{} - s.disp;
        for (Cell off : s.swept) r.swept.push_back(off - s.disp);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::optional<int> shortest_travel_time(const Workspace& w, Cell from,
                                        std::span<const Cell> to_any,
                                        std::span<const StepShape> steps) {
    if (!w.is_free(from)) throw DomainError("travel origin " + to_string(from) + " is not free");
    if (to_any.empty()) throw DomainError("travel target set is empty");
    const auto field = w.distance_field(std::span<const Cell>(&from, 1), steps);
    std::optional<int> best;
    for (Cell t : to_any) {
        if (!w.in_bounds(t)) continue;
        int d = field[static_cast<std::size_t>(w.id(t))];
        if (d >= 0 && (!best || d < *best)) best = d;
    }
    return best;
}

std::vector<Cell> shortest_path(const Workspace& w, Cell from, std::span<const Cell> to_any,
                                std::span<const StepShape> steps,
                                const std::function<bool(Cell)>& blocked) {
    if (to_any.empty() || !w.is_free(from)) return {};
    // Distances to the target set; descend greedily from `from`.
    const auto back = reversed(steps);
    const auto field = w.distance_field(to_any, back, blocked);
    int d = field[static_cast<std::size_t>(w.id(from))];
    if (d < 0) return {};
    auto passable = [&](Cell c) { return w.is_free(c) && !(blocked && blocked(c)); };
    std::vector<Cell> path{from};
    Cell cur = from;
    while (d > 0) {
        bool advanced = false;
        for (const auto& step : steps) {
            bool ok = true;
            for (Cell off : step.swept)
                if (!passable(cur + off)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            Cell n = cur + step.disp;
            if (field[static_cast<std::size_t>(w.id(n))] == d - 1) {
                cur = n;
                --d;
                path.push_back(cur);
                advanced = true;
                break;
            }
        }
        if (!advanced) return {};
    }
    return path;
}

Workspace parse_grid_map(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw ParseError("grid map: empty input");

    int width = 0, height = 0;
    {
        std::istringstream header{std::string(lines[0])};
        std::string extra;
        if (!(header >> width >> height) || (header >> extra))
            throw ParseError("grid map: first line must be 'width height'");
    }
    if (width <= 0 || height <= 0) throw ParseError("grid map: dimensions must be positive");
    if (static_cast<int>(lines.size()) - 1 != height)
        throw ParseError("grid map: expected " + std::to_string(height) + " rows, found " +
                         std::to_string(lines.size() - 1));
    std::vector<Cell> obstacles;
    for (int y = 0; y < height; ++y) {
        const auto row = lines[static_cast<std::size_t>(y) + 1];
        if (static_cast<int>(row.size()) != width)
            throw ParseError("grid map: row " + std::to_string(y) + " has " +
                             std::to_string(row.size()) + " glyphs, expected " +
                             std::to_string(width));
        for (int x = 0; x < width; ++x) {
            const char g = row[static_cast<std::size_t>(x)];
            if (g == '#')
                obstacles.push_back({x, y});
            else if (g != '.')
                throw ParseError(std::string("grid map: unknown glyph '") + g + "' at " +
                                 to_string({x, y}));
        }
    }
    try {
        return Workspace(width, height, std::move(obstacles));
    } catch (const DomainError& e) {
        throw ParseError(std::string("grid map: ") + e.what());
    }
}

std::string format_grid_map(const Workspace& w) {
    std::string out = std::to_string(w.width()) + " " + std::to_string(w.height()) + "\n";
    for (int y = 0; y < w.height(); ++y) {
        for (int x = 0; x < w.width(); ++x) out += w.is_free({x, y}) ? '.' : '#';
        out += '\n';
    }
    return out;
}

}  // namespace mrp
