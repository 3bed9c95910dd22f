#pragma once

#include <optional>
#include <vector>

#include "mrp/scenario.hpp"

namespace mrp {

struct GreedyWorker {
    RobotState state;
    int cursor = 0;           // 0-based index of the next loop move
    bool stationary = false;  // cannot make its next planned move
    int assigned = -1;        // serving recharger, or -1
};

struct GreedyRecharger {
    Cell cell;
    int assigned = -1;  // worker being served or approached, or -1 when available
    Cell target;        // cell next to the worker's stopping cell
};

struct GreedyState {
    int step = 0;  // next action index
    bool extension = false;
    std::vector<GreedyWorker> workers;
    std::vector<GreedyRecharger> rechargers;
};

// Initial state: workers at home with emax, rechargers on the first |C| cells of P.
// Throws DomainError when P is too small.
GreedyState initial_greedy_state(const Scenario& s);

// Where and after how many moves a worker stops: the end of its planned moves
// or the first move its charge cannot pay for.
struct StopPoint {
    Cell cell;
    int moves = 0;
    bool depleted = false;
};
StopPoint stopping_point(const Scenario& s, const GreedyState& g, int worker);

// Steps until recharger c can start recharging worker r: the larger of r's
// moves until it stops and c's travel time to the stop cell's neighborhood
// (the stop cell itself excluded). nullopt when unreachable.
std::optional<int> lambda(const Scenario& s, const GreedyState& g, int recharger, int worker);

struct GreedyOptions {
    // Extension steps allowed past T before giving up; default 8 * (W + H) * |R|.
    std::optional<int> extension_cap;
};

// Throws PlanningError naming the worker when no recharger can reach it, or
// when the extension does not restore the initial states within the cap.
PlanBundle plan_greedy(const Scenario& s, const GreedyOptions& o = {});

}  // namespace mrp
