#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mrp/scenario.hpp"
#include "mrp/smt.hpp"

namespace mrp {

// One service instant of a recharger recorded in phase 1.
struct RechargeInstance {
    int step = 0;  // 0-based action index
    Cell cell;     // serviced worker's cell
    int worker = 0;
    friend bool operator==(const RechargeInstance&, const RechargeInstance&) = default;
};

// Per recharger, its service instants (eta).
using RechargeInstanceSet = std::vector<std::vector<RechargeInstance>>;

// zeta for one worker. `tau` is the 0-based time point from which the worker
// stays at home for the rest of the hypercycle; `d` refill steps bring it back to emax.
struct WorkerResidual {
    int tau = 0;
    int d = 0;
    Energy energy_at_tau = 0;
    friend bool operator==(const WorkerResidual&, const WorkerResidual&) = default;
};

struct PhaseOneResult {
    smt::Status status = smt::Status::Timeout;
    int T = 0;
    // Worker plans over T with recharges after tau removed (they become waits).
    std::vector<std::vector<Primitive>> worker_plans;
    std::vector<std::vector<Primitive>> recharger_plans;
    std::vector<Cell> recharger_starts;
    RechargeInstanceSet eta;
    std::vector<WorkerResidual> zeta;
    std::vector<RechargeEvent> events;  // kept recharges (before tau)
    std::int64_t W = 0;                 // phase-1 objective over T
    double seconds = 0.0;
    std::string diagnostic;             // set when infeasible
};

struct TwoShotOptions {
    smt::SolverConfig solver = smt::default_solver_config();
    // Budget for phase 1; a best-so-far model is accepted when it runs out.
    double phase_one_seconds = 10800.0;
    // Bisect W with plain satisfiability queries instead of the solver's optimizer.
    bool phase_one_descent = true;
    // Budget for each phase-2 feasibility probe and for the final U optimization.
    double probe_seconds = 600.0;
    double travel_seconds = 120.0;
    bool minimize_travel = true;
    std::optional<int> t_prime_cap;  // default T + 4 * max(width, height)
    bool distance_hints = true;
    bool symmetry_breaking = true;
};

// Phase 1: minimize W with position matching only. Never throws for
// infeasible instances; see status and diagnostic.
PhaseOneResult phase_one(const Scenario& s, const TwoShotOptions& o = {});

// Phase-2 program at a given extended horizon (recharger trajectories only).
smt::Program encode_phase_two(const Scenario& s, const PhaseOneResult& p1, int T_prime,
                              bool with_objective);

// Solves the phase-2 feasibility question at one extended horizon.
smt::Status check_phase_two(const Scenario& s, const PhaseOneResult& p1, int T_prime,
                            const smt::SolverConfig& cfg);

struct PhaseTwoResult {
    PlanBundle bundle;
    std::vector<int> probed;           // horizons tried, in order
    bool minimality_proven = true;     // false when some probe below T' timed out
    smt::Status travel_status = smt::Status::Optimal;
};

// Phase 2: smallest T' >= T for which rechargers restore every matching.
// Throws PlanningError when the cap is reached.
PhaseTwoResult phase_two(const Scenario& s, const PhaseOneResult& p1, const TwoShotOptions& o = {});

struct CertificateReport {
    bool certified = false;
    // |L_i| - (T' - 1 - tau_i); positive for every worker when certified.
    std::vector<int> margins;
};

CertificateReport certify_loop_counts(const Scenario& s, const PlanBundle& b,
                                      const std::vector<WorkerResidual>& zeta);

struct TwoShotResult {
    PhaseOneResult phase1;
    PhaseTwoResult phase2;
    CertificateReport certificate;
};

// Both phases. Throws PlanningError when phase 1 is infeasible or phase 2 hits its cap.
TwoShotResult plan_twoshot(const Scenario& s, const TwoShotOptions& o = {});

std::string phase_one_to_json(const PhaseOneResult& r);

}  // namespace mrp
