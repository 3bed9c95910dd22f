// Shared pieces of the constraint encodings. Internal to the library.
#pragma once

#include <functional>
#include <vector>

#include "mrp/scenario.hpp"
#include "mrp/smt.hpp"

namespace mrp::detail {

using smt::Program;
using smt::Term;

// Recharger positions and actions over time points 0..T-1, one-hot over a
// reachability-pruned cell domain. Handles motion legality, obstacle and
// mutual collision avoidance, and the travel-cost sum.
class RechargerLayer {
public:
    struct Options {
        int T = 0;
        // Allowed cells at t = 0 and at t = T-1, per recharger.
        std::vector<std::vector<Cell>> initial, final;
        // True when cell c is occupied by something static during step t
        // (the move from time point t to t+1). May be empty.
        std::function<bool(int step, Cell c)> step_blocked;
        std::string prefix = "r";
    };

    RechargerLayer(Program& p, const Scenario& s, Options o);

    int T() const noexcept { return T_; }
    int count() const noexcept { return static_cast<int>(at_.size()); }
    // Position literal; falsity() outside the domain.
    Term at(int j, int t, Cell c) const;
    // Cells in the domain of recharger j at time t.
    const std::vector<Cell>& domain(int j, int t) const { return dom_[j][t]; }
    // Action literal; a == primitives.size() is wait.
    Term act(int j, int t, int a) const { return act_[j][t][a]; }
    Term waits(int j, int t) const { return act_[j][t].back(); }
    int action_count(int j) const { return static_cast<int>(act_[j][0].size()); }
    Term travel_cost() const { return travel_; }
    bool feasible() const noexcept { return feasible_; }

    // Occupancy literals of recharger j during step t: (cell, condition).
    std::vector<std::pair<Cell, Term>> occupancy(int j, int step) const;

    // Reads positions and actions back from a model.
    std::vector<Cell> positions(const smt::Model& m, int j) const;
    std::vector<Primitive> actions(const smt::Model& m, int j) const;

private:
    Program& p_;
    const Scenario& s_;
    int T_;
    bool feasible_ = true;
    std::vector<std::vector<std::vector<Cell>>> dom_;                 // [j][t]
    std::vector<std::vector<std::vector<Term>>> at_;                  // [j][t][cell id]
    std::vector<std::vector<std::vector<Term>>> act_;                 // [j][t][a]
    Term travel_;
};

// Adds !(a && b) for every pair of literals from A and B naming the same cell.
void forbid_shared_cells(Program& p, const std::vector<std::pair<Cell, Term>>& A,
                         const std::vector<std::pair<Cell, Term>>& B);

struct JointOptions {
    int T = 0;
    bool charge_matching = true;   // worker charge at T equals emax
    bool recharger_return = true;  // recharger ends where it started
    bool prefer_moves = true;      // after W, minimize recharge steps (maximizes loop motion)
    bool minimize_travel = true;   // include U
    ObjectiveMode mode = ObjectiveMode::Lexicographic;
    std::int64_t w1 = 1000, w2 = 1;
    bool distance_hints = true;
    bool symmetry_breaking = true;
};

// Joint worker + recharger encoding over a hypercycle of T time points.
class JointEncoding {
public:
    JointEncoding(const Scenario& s, JointOptions o);

    const Program& program() const { return p_; }
    Program& program() { return p_; }

    struct Plans {
        std::vector<std::vector<Primitive>> workers, rechargers;
        std::vector<Cell> recharger_starts;
        std::vector<RechargeEvent> events;
    };
    Plans extract(const smt::Model& m) const;

    Term wait_total() const { return wait_total_; }
    Term recharge_total() const { return recharge_total_; }
    Term travel_total() const { return layer_->travel_cost(); }

private:
    Term cur(int i, int t, int k) const { return cur_[i][t][k]; }

    const Scenario& s_;
    JointOptions o_;
    Program p_;
    std::unique_ptr<RechargerLayer> layer_;
    std::vector<std::vector<std::vector<Term>>> cur_;  // [i][t][k]
    std::vector<std::vector<Term>> e_, mv_, rc_;       // [i][t]
    std::vector<std::vector<std::vector<Term>>> srv_;  // [i][j][t]
    Term wait_total_, recharge_total_;
};

// Breadth-first distance from a cell set using a recharger's primitives;
// -1 where unreachable.
std::vector<int> distances_from(const Workspace& w, const std::vector<Cell>& from,
                                const std::vector<MotionPrimitive>& prims);

// Union of neighborhoods of a worker's loop cells.
std::vector<Cell> service_region(const Workspace& w, const WorkingLoop& loop);

}  // namespace mrp::detail
