#include "mrp/kinematics.hpp"

#include <algorithm>
#include <set>

#include "mrp/error.hpp"

namespace mrp {

MotionPrimitive MotionPrimitive::unit(std::string name, Cell disp, Energy cost) {
    MotionPrimitive m;
    m.name = std::move(name);
    m.disp = disp;
    m.cost = cost;
    m.intermediate = {{0, 0}, disp};
    return m;
}

void MotionPrimitive::check() const {
    if (cost < 0) throw DomainError("primitive " + name + ": negative cost");
    if (intermediate.empty() || intermediate.front() != Cell{0, 0} || intermediate.back() != disp)
        throw DomainError("primitive " + name +
                          ": intermediate cells must start at (0,0) and end at the displacement");
    if (disp == Cell{0, 0}) throw DomainError("primitive " + name + ": zero displacement");
}

std::vector<MotionPrimitive> four_connected_primitives(Energy cost) {
    return {MotionPrimitive::unit("E", {1, 0}, cost), MotionPrimitive::unit("W", {-1, 0}, cost),
            MotionPrimitive::unit("S", {0, 1}, cost), MotionPrimitive::unit("N", {0, -1}, cost)};
}

std::vector<StepShape> step_shapes(std::span<const MotionPrimitive> prims) {
    std::vector<StepShape> out;
    out.reserve(prims.size());
    for (const auto& p : prims) out.push_back({p.disp, p.intermediate});
    return out;
}

std::vector<Cell> swept_cells(Cell from, const MotionPrimitive& prim) {
    std::vector<Cell> out;
    out.reserve(prim.intermediate.size());
    for (Cell off : prim.intermediate) out.push_back(from + off);
    return out;
}

namespace {

struct Applier {
    const RobotState& s;
    Energy emax;
    Energy delta_max;

    RobotState operator()(const MotionPrimitive& m) const {
        if (s.v != m.v_from)
            throw KinematicsError("velocity precondition",
                                  "primitive " + m.name + " requires velocity " +
                                      std::to_string(m.v_from.id) + ", state has " +
                                      std::to_string(s.v.id));
        if (s.e - m.cost < 0)
            throw KinematicsError("energy underflow", "primitive " + m.name + " costs " +
                                                          std::to_string(m.cost) + ", energy is " +
                                                          std::to_string(s.e));
        return {s.p + m.disp, m.v_to, s.e - m.cost};
    }
    RobotState operator()(const Wait&) const {
        if (s.v != kStationary)
            throw KinematicsError("velocity precondition", "wait requires the stationary velocity");
        return s;
    }
    RobotState operator()(const Recharge& r) const {
        if (s.v != kStationary)
            throw KinematicsError("velocity precondition",
                                  "recharge requires the stationary velocity");
        if (r.delta <= 0 || r.delta > delta_max)
            throw KinematicsError("recharge amount out of range",
                                  "delta " + std::to_string(r.delta) + " not in (0, " +
                                      std::to_string(delta_max) + "]");
        if (s.e >= emax)
            throw KinematicsError("recharge at full charge", "energy already " + std::to_string(s.e));
        if (s.e + r.delta > emax)
            throw KinematicsError("overcharge", std::to_string(s.e) + " + " +
                                                    std::to_string(r.delta) + " exceeds " +
                                                    std::to_string(emax));
        return {s.p, s.v, s.e + r.delta};
    }
};

}  // namespace

RobotState apply(const RobotState& s, const Primitive& prim, Energy emax, Energy delta_max) {
    return std::visit(Applier{s, emax, delta_max}, prim);
}

int recharge_steps_needed(Energy e, Energy emax, Energy delta_max) {
    if (delta_max <= 0) throw DomainError("delta_max must be positive");
    if (e < 0 || e > emax) throw DomainError("energy outside [0, emax]");
    return static_cast<int>((emax - e + delta_max - 1) / delta_max);
}

WorkingLoop::WorkingLoop(std::vector<Cell> points, std::vector<MotionPrimitive> moves)
    : points_(std::move(points)), moves_(std::move(moves)) {
    if (points_.size() < 2) throw DomainError("working loop needs at least two points");
    if (points_.front() != points_.back())
        throw DomainError("working loop is not closed (last point differs from first)");
    if (moves_.size() + 1 != points_.size())
        throw DomainError("working loop needs exactly one move per point");
    std::set<Cell> seen;
    for (std::size_t k = 0; k < moves_.size(); ++k) {
        moves_[k].check();
        if (points_[k] + moves_[k].disp != points_[k + 1])
            throw DomainError("move " + std::to_string(k + 1) + " (" + moves_[k].name +
                              ") does not lead from " + to_string(points_[k]) + " to " +
                              to_string(points_[k + 1]));
        if (!seen.insert(points_[k]).second)
            throw DomainError("working loop visits " + to_string(points_[k]) + " twice");
    }
}

Energy WorkingLoop::cost() const {
    Energy c = 0;
    for (const auto& m : moves_) c += m.cost;
    return c;
}

std::vector<Cell> WorkingLoop::cells() const {
    std::set<Cell> s;
    for (std::size_t k = 0; k < moves_.size(); ++k)
        for (Cell c : swept_cells(points_[k], moves_[k])) s.insert(c);
    return {s.begin(), s.end()};
}

LoopCursor advance_cursor(LoopCursor c, const Primitive& prim, const WorkingLoop& loop) {
    const int m = loop.size();
    if (c.index < 1 || c.index > m)
        throw DomainError("cursor " + std::to_string(c.index) + " outside [1, " +
                          std::to_string(m) + "]");
    const auto* mp = std::get_if<MotionPrimitive>(&prim);
    if (!mp) return c;
    const auto& expected = loop.move(c.index - 1);
    if (mp->disp != expected.disp || mp->name != expected.name)
        throw KinematicsError("loop order", "expected " + expected.name + " at cursor " +
                                                std::to_string(c.index) + ", got " + mp->name);
    return {c.index == m ? 1 : c.index + 1};
}

std::string describe(const Primitive& p) {
    if (const auto* m = std::get_if<MotionPrimitive>(&p)) return "move:" + m->name;
    if (const auto* r = std::get_if<Recharge>(&p)) return "recharge:" + std::to_string(r->delta);
    return "wait";
}

}  // namespace mrp
