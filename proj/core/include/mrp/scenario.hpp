#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mrp/kinematics.hpp"
#include "mrp/workspace.hpp"

namespace mrp {

enum class ObjectiveMode { Lexicographic, Weighted };

std::string to_string(ObjectiveMode m);
ObjectiveMode objective_mode_from_string(const std::string& s);

struct WorkerSpec {
    int id = 0;
    WorkingLoop loop;
    Energy emax = 0;
    std::string primitive_set;  // key into Scenario::primitive_sets
    std::vector<MotionPrimitive> primitives;

    friend bool operator==(const WorkerSpec&, const WorkerSpec&) = default;
};

struct RechargerSpec {
    int id = 0;
    std::string primitive_set;
    std::vector<MotionPrimitive> primitives;

    friend bool operator==(const RechargerSpec&, const RechargerSpec&) = default;
};

// All energies (emax, delta_max, primitive costs, recharge amounts) are held in
// scaled integer units: one nominal unit in a scenario file is energy_scale
// internal units.
struct Scenario {
    std::string name;
    Workspace workspace;
    int energy_scale = 1;
    Energy delta_max = 0;
    int horizon = 0;  // T, number of time points in the hypercycle
    ObjectiveMode objective_mode = ObjectiveMode::Lexicographic;
    std::int64_t w1 = 1000;
    std::int64_t w2 = 1;
    std::map<std::string, std::vector<MotionPrimitive>> primitive_sets;
    std::vector<WorkerSpec> workers;
    std::vector<RechargerSpec> rechargers;
    std::vector<Cell> potential_starts;  // P, in declaration order

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Invariant diagnostics; empty when the scenario is valid. Each entry reads
// "<field>: <clause>", e.g. "workers[1].loop: loop cell occupied at (3,4)".
std::vector<std::string> scenario_diagnostics(const Scenario& s);
// Non-fatal remarks, e.g. a horizon too short to fit one loop.
std::vector<std::string> scenario_warnings(const Scenario& s);
// Throws ValidationError carrying scenario_diagnostics().
void validate_scenario(const Scenario& s);

// Hex SHA-256 of the canonical JSON form, ignoring the display name.
std::string scenario_digest(const Scenario& s);

// JSON text of the scenario; maps are written inline.
std::string scenario_to_json(const Scenario& s, int indent = 2);
// `base_dir` resolves relative map paths. Throws ParseError or ValidationError.
Scenario scenario_from_json(const std::string& text, const std::filesystem::path& base_dir = {});

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

// --- plans ---------------------------------------------------------------

struct RechargeEvent {
    int step = 0;  // 0-based action index, the recharge moves state step -> step+1
    int worker = 0;
    int recharger = 0;
    Energy delta = 0;
    Cell cell;            // worker position
    Cell recharger_cell;  // serving recharger position

    friend auto operator<=>(const RechargeEvent&, const RechargeEvent&) = default;
};

struct RobotPlan {
    std::vector<Primitive> actions;      // T' - 1 entries
    std::vector<RobotState> trajectory;  // T' entries

    friend bool operator==(const RobotPlan&, const RobotPlan&) = default;
};

struct PlanBundle {
    std::string scenario_digest;
    std::string algorithm;
    int energy_scale = 1;
    int T = 0;
    int T_prime = 0;
    std::vector<RobotPlan> workers;     // indexed like Scenario::workers
    std::vector<RobotPlan> rechargers;  // indexed like Scenario::rechargers
    std::vector<Cell> recharger_starts;
    std::vector<RechargeEvent> events;  // sorted by (step, worker)
    std::string solve_status;           // "optimal", "satisfiable", or empty for greedy
    double runtime_seconds = 0.0;

    friend bool operator==(const PlanBundle&, const PlanBundle&) = default;
};

std::string bundle_to_json(const PlanBundle& b, int indent = 2);
PlanBundle bundle_from_json(const std::string& text);
void save_bundle(const PlanBundle& b, const std::filesystem::path& path);
PlanBundle load_bundle(const std::filesystem::path& path);

// Replays actions from the given initial states without checking anything
// beyond kinematics::apply. Workers start at their loop home with emax.
// Throws KinematicsError on the first illegal action.
std::vector<RobotState> replay_states(const RobotState& start, const std::vector<Primitive>& actions,
                                      Energy emax, Energy delta_max);

// Fills in trajectories from actions and recharger starts. Arithmetic only:
// illegal actions are left for the executor to report.
void rebuild_trajectories(PlanBundle& b, const Scenario& s);

// Builds a bundle with digest, trajectories and sorted events.
PlanBundle assemble_bundle(const Scenario& s, std::string algorithm, int T_prime,
                           std::vector<std::vector<Primitive>> workers,
                           std::vector<std::vector<Primitive>> rechargers,
                           std::vector<Cell> recharger_starts, std::vector<RechargeEvent> events);

// Convenience queries.
int worker_loops_completed(const PlanBundle& b, const Scenario& s, int worker);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mrp
