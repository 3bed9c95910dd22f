#include "mrp/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "mrp/error.hpp"

namespace mrp {

std::string to_string(ObjectiveMode m) {
    return m == ObjectiveMode::Lexicographic ? "lexicographic" : "weighted";
}

ObjectiveMode objective_mode_from_string(const std::string& s) {
    if (s == "lexicographic") return ObjectiveMode::Lexicographic;
    if (s == "weighted") return ObjectiveMode::Weighted;
    throw ParseError("unknown objective mode '" + s + "'");
}

std::vector<std::string> scenario_diagnostics(const Scenario& s) {
    std::vector<std::string> out;
    auto add = [&](const std::string& field, const std::string& clause) {
        out.push_back(field + ": " + clause);
    };
    const Workspace& w = s.workspace;
    if (s.energy_scale < 1) add("energy_scale", "must be at least 1");
    if (s.delta_max <= 0) add("delta_max", "must be positive");
    if (s.horizon < 2) add("horizon", "must be at least 2");
    if (s.w1 < 0 || s.w2 < 0) add("objective", "weights must be non-negative");
    if (s.rechargers.empty()) add("rechargers", "at least one recharger is required");

    std::set<int> ids;
    std::map<Cell, std::size_t> owner;
    for (std::size_t i = 0; i < s.workers.size(); ++i) {
        const auto& wk = s.workers[i];
        const std::string f = "workers[" + std::to_string(i) + "]";
        if (!ids.insert(wk.id).second) add(f + ".id", "duplicate worker id " + std::to_string(wk.id));
        if (wk.emax <= 0) add(f + ".emax", "must be positive");
        if (wk.loop.size() == 0) {
            add(f + ".loop", "empty loop");
            continue;
        }
        for (std::size_t k = 0; k < wk.loop.moves().size(); ++k) {
            const auto& mv = wk.loop.moves()[k];
            bool declared = std::any_of(wk.primitives.begin(), wk.primitives.end(),
                                        [&](const MotionPrimitive& p) { return p == mv; });
            if (!declared)
                add(f + ".loop.moves[" + std::to_string(k) + "]",
                    "primitive " + mv.name + " not in the worker's primitive set");
            if (!mv.stationary_only())
                add(f + ".loop.moves[" + std::to_string(k) + "]",
                    "planners support stationary (v0) primitives only");
        }
        if (wk.loop.cost() > wk.emax)
            add(f + ".loop", "loop cost " + std::to_string(wk.loop.cost()) + " exceeds emax " +
                                 std::to_string(wk.emax));
        for (Cell c : wk.loop.cells()) {
            if (!w.is_free(c)) {
                add(f + ".loop", "loop cell occupied at " + to_string(c));
                continue;
            }
            auto [it, fresh] = owner.emplace(c, i);
            if (!fresh && it->second != i)
                add(f + ".loop", "loops intersect at " + to_string(c) + " (with workers[" +
                                     std::to_string(it->second) + "])");
        }
    }
    ids.clear();
    for (std::size_t j = 0; j < s.rechargers.size(); ++j) {
        const auto& r = s.rechargers[j];
        const std::string f = "rechargers[" + std::to_string(j) + "]";
        if (!ids.insert(r.id).second) add(f + ".id", "duplicate recharger id " + std::to_string(r.id));
        if (r.primitives.empty()) add(f + ".primitives", "primitive set is empty");
        for (const auto& p : r.primitives)
            if (!p.stationary_only())
                add(f + ".primitives", "planners support stationary (v0) primitives only");
    }
    std::set<Cell> seen;
    for (std::size_t k = 0; k < s.potential_starts.size(); ++k) {
        Cell c = s.potential_starts[k];
        const std::string f = "potential_starts[" + std::to_string(k) + "]";
        if (!w.is_free(c)) add(f, "cell " + to_string(c) + " is not free");
        if (!seen.insert(c).second) add(f, "duplicate cell " + to_string(c));
    }
    return out;
}

std::vector<std::string> scenario_warnings(const Scenario& s) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.workers.size(); ++i)
        if (s.horizon - 1 < s.workers[i].loop.size())
            out.push_back("workers[" + std::to_string(i) + "]: horizon " + std::to_string(s.horizon) +
                          " cannot fit one loop of " + std::to_string(s.workers[i].loop.size()) +
                          " moves; the worker can only wait");
    if (s.potential_starts.size() < s.rechargers.size())
        out.push_back("potential_starts: fewer cells than rechargers, the instance is infeasible");
    return out;
}

void validate_scenario(const Scenario& s) {
    auto d = scenario_diagnostics(s);
    if (!d.empty()) throw ValidationError(std::move(d));
}

std::vector<RobotState> replay_states(const RobotState& start, const std::vector<Primitive>& actions,
                                      Energy emax, Energy delta_max) {
    std::vector<RobotState> out;
    out.reserve(actions.size() + 1);
    out.push_back(start);
    for (const auto& a : actions) out.push_back(apply(out.back(), a, emax, delta_max));
    return out;
}

namespace {

std::vector<RobotState> lenient_replay(RobotState st, const std::vector<Primitive>& actions) {
    std::vector<RobotState> out{st};
    for (const auto& a : actions) {
        if (const auto* m = std::get_if<MotionPrimitive>(&a)) {
            st.p = st.p + m->disp;
            st.e -= m->cost;
            st.v = m->v_to;
        } else if (const auto* r = std::get_if<Recharge>(&a)) {
            st.e += r->delta;
        }
        out.push_back(st);
    }
    return out;
}

}  // namespace

void rebuild_trajectories(PlanBundle& b, const Scenario& s) {
    if (b.workers.size() != s.workers.size() || b.rechargers.size() != s.rechargers.size() ||
        b.recharger_starts.size() != s.rechargers.size())
        throw DomainError("bundle robot counts do not match the scenario");
    for (std::size_t i = 0; i < s.workers.size(); ++i) {
        const auto& w = s.workers[i];
        b.workers[i].trajectory = lenient_replay({w.loop.home(), kStationary, w.emax}, b.workers[i].actions);
    }
    // Rechargers carry no battery model; their motion costs are tallied as U instead.
    for (std::size_t j = 0; j < s.rechargers.size(); ++j) {
        auto traj = lenient_replay({b.recharger_starts[j], kStationary, 0}, b.rechargers[j].actions);
        for (auto& st : traj) st.e = 0;
        b.rechargers[j].trajectory = std::move(traj);
    }
}

PlanBundle assemble_bundle(const Scenario& s, std::string algorithm, int T_prime,
                           std::vector<std::vector<Primitive>> workers,
                           std::vector<std::vector<Primitive>> rechargers,
                           std::vector<Cell> recharger_starts, std::vector<RechargeEvent> events) {
    PlanBundle b;
    b.scenario_digest = scenario_digest(s);
    b.algorithm = std::move(algorithm);
    b.energy_scale = s.energy_scale;
    b.T = s.horizon;
    b.T_prime = T_prime;
    for (auto& a : workers) b.workers.push_back({std::move(a), {}});
    for (auto& a : rechargers) b.rechargers.push_back({std::move(a), {}});
    b.recharger_starts = std::move(recharger_starts);
    std::sort(events.begin(), events.end(), [](const RechargeEvent& x, const RechargeEvent& y) {
        return std::tie(x.step, x.worker) < std::tie(y.step, y.worker);
    });
    b.events = std::move(events);
    rebuild_trajectories(b, s);
    return b;
}

int worker_loops_completed(const PlanBundle& b, const Scenario& s, int worker) {
    const auto& acts = b.workers.at(static_cast<std::size_t>(worker)).actions;
    const long moves = std::count_if(acts.begin(), acts.end(), [](const Primitive& p) {
        return std::holds_alternative<MotionPrimitive>(p);
    });
    return static_cast<int>(moves / s.workers.at(static_cast<std::size_t>(worker)).loop.size());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace mrp
