#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrp/scenario.hpp"
#include "mrp/smt.hpp"

namespace mrp {

enum class Algorithm { OneShot, TwoShot, Greedy };
std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct PlanRequest {
    Algorithm algorithm = Algorithm::TwoShot;
    smt::SolverConfig solver = smt::default_solver_config();
    double timeout_seconds = 10800.0;  // per solve
};

enum class PlanStatus { Ok, Infeasible, Timeout };

struct PlanOutcome {
    PlanStatus status = PlanStatus::Infeasible;
    std::optional<PlanBundle> bundle;
    std::string message;  // why there is no bundle, or solver remarks
    double seconds = 0.0;
};

// Runs one planner. Planning failures come back as a status, other errors propagate.
PlanOutcome run_planner(const Scenario& s, const PlanRequest& req);

enum class SweepKind { Horizon, Starts, DeltaMax, AlgoCompare };
std::string to_string(SweepKind k);
SweepKind sweep_kind_from_string(const std::string& s);

struct SweepOptions {
    SweepKind kind = SweepKind::Horizon;
    // T values, |P| sizes (0 = every free cell off the loops), or delta_max
    // values in file units. Unused for algo-compare.
    std::vector<int> values;
    std::vector<Algorithm> algorithms{Algorithm::TwoShot};
    PlanRequest request;
    int jobs = 1;
    std::uint64_t seed = 0;
};

struct SweepRow {
    std::string parameter;  // column label, e.g. "T=20" or "|P|=4"
    int value = 0;
    std::string algorithm;
    std::string status;  // ok, infeasible, timeout
    int T = 0;
    int T_prime = 0;
    double E = 0.0;
    double work_percent = 0.0;
    double recharge_percent = 0.0;
    double seconds = 0.0;
};

// Scenario for one sweep cell. |P| sizes keep a prefix of the declared order.
Scenario sweep_variant(const Scenario& base, SweepKind kind, int value);

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepOptions& o);

// CSV with a header comment carrying digest, configuration and seed.
std::string sweep_csv(const Scenario& base, const SweepOptions& o, const std::vector<SweepRow>& rows);
// Grouped bar chart of E per parameter value and algorithm.
std::string sweep_svg(const std::vector<SweepRow>& rows, const std::string& title);

// Default values per kind: T {20,25,30}, |P| {2,4,8,16,0}, delta_max {4,6,8,10,14}.
std::vector<int> default_sweep_values(SweepKind k);

}  // namespace mrp
