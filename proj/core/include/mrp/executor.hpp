#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrp/scenario.hpp"

namespace mrp {

struct Violation {
    std::string robot;  // "worker <id>", "recharger <id>" or "bundle"
    int step = 0;       // 0-based action index; T'-1 for end-of-hypercycle checks
    std::string clause;
    std::string detail;
    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const noexcept { return violations.empty(); }
    bool has(const std::string& clause) const;
};

// Replays every plan and checks kinematics, obstacles, collisions, recharge
// adjacency, loop order and the end-of-hypercycle matchings.
ValidationReport validate(const PlanBundle& b, const Scenario& s);

struct WorkerEfficiency {
    int work = 0;
    int recharge = 0;
    int wait = 0;
    int loops = 0;
};

struct EfficiencyReport {
    int T = 0;
    int T_prime = 0;
    std::int64_t W = 0;  // worker wait actions
    std::int64_t U = 0;  // recharger motion cost
    std::vector<WorkerEfficiency> workers;
    double E = 0.0;             // over |R| * T'
    double work_percent = 0.0;  // same denominator
    double recharge_percent = 0.0;
    double E_at_T = 0.0;        // same W over |R| * T
};

// (slots - W) / slots * 100 with slots = workers * horizon. Throws DomainError
// unless workers >= 1, horizon >= 1 and 0 <= W <= slots.
double efficiency_percent(int workers, int horizon, std::int64_t W);
// count / (workers * horizon) * 100, the split used for work and recharge shares.
double slot_percent(std::int64_t count, int workers, int horizon);

EfficiencyReport efficiency(const PlanBundle& b, const Scenario& s);

struct ReplayReport {
    bool ok = true;
    int cycle = 0;  // 1-based, set on divergence
    int step = 0;   // 1-based time point inside the cycle
    std::string robot;
};

// Plays the bundle k times back to back and compares every cycle's state
// sequence with the first one.
ReplayReport replay_hypercycles(const PlanBundle& b, const Scenario& s, int k);

// Per-robot step delays in fractional steps. Robots are indexed workers first,
// then rechargers. A step's duration is 1 + offset + jitter.
struct DelayModel {
    // offsets[robot][step]; missing entries are zero.
    std::vector<std::vector<double>> offsets;
    double jitter_max = 0.0;  // uniform in [0, jitter_max]
    std::uint64_t seed = 0;

    double delay(int robot, int cycle, int step) const;
};

struct SyncReport {
    bool completed = false;
    bool deadlock = false;
    bool states_match = true;      // discrete states equal the nominal replay every cycle
    int sync_messages_per_cycle = 0;
    std::vector<double> makespan;  // per cycle
    std::vector<double> inflation; // makespan - (T' - 1)
    // On deadlock: robot -> robot it waits for.
    std::vector<std::pair<std::string, std::string>> blocked;
};

// Event-driven replay under delays. Recharge steps start only when both the
// worker and its recharger are there; a cycle starts for a robot once it has
// finished the previous one and every recharger has broadcast sync from home.
SyncReport simulate_with_delays(const PlanBundle& b, const Scenario& s, const DelayModel& dm, int cycles);

std::string validation_to_json(const ValidationReport& r);
std::string efficiency_to_json(const EfficiencyReport& r);
std::string replay_to_json(const ReplayReport& r);
std::string sync_to_json(const SyncReport& r);

}  // namespace mrp
