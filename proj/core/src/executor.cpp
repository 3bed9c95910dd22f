#include "mrp/executor.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"
#include "mrp/error.hpp"

namespace mrp {

namespace {

using ojson = nlohmann::ordered_json;

std::string worker_name(const Scenario& s, std::size_t i) { return "worker " + std::to_string(s.workers[i].id); }
std::string recharger_name(const Scenario& s, std::size_t j) {
    return "recharger " + std::to_string(s.rechargers[j].id);
}

bool allowed(const std::vector<MotionPrimitive>& set, const MotionPrimitive& m) {
    return std::find(set.begin(), set.end(), m) != set.end();
}

// Cells a robot occupies during a step.
std::vector<Cell> occupancy(Cell at, const Primitive& a) {
    if (const auto* m = std::get_if<MotionPrimitive>(&a)) return swept_cells(at, *m);
    return {at};
}

// Arithmetic replay; kinematic errors are left to validate().
RobotState step_lenient(RobotState st, const Primitive& a) {
    if (const auto* m = std::get_if<MotionPrimitive>(&a)) {
        st.p = st.p + m->disp;
        st.e -= m->cost;
        st.v = m->v_to;
    } else if (const auto* r = std::get_if<Recharge>(&a)) {
        st.e += r->delta;
    }
    return st;
}

}  // namespace

bool ValidationReport::has(const std::string& clause) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.clause == clause; });
}

ValidationReport validate(const PlanBundle& b, const Scenario& s) {
    ValidationReport rep;
    auto add = [&](std::string robot, int step, std::string clause, std::string detail) {
        rep.violations.push_back({std::move(robot), step, std::move(clause), std::move(detail)});
    };
    const std::size_t nw = s.workers.size(), nc = s.rechargers.size();
    if (b.workers.size() != nw || b.rechargers.size() != nc || b.recharger_starts.size() != nc) {
        add("bundle", 0, "robot count", "bundle robot counts do not match the scenario");
        return rep;
    }
    if (!b.scenario_digest.empty() && b.scenario_digest != scenario_digest(s))
        add("bundle", 0, "scenario digest", "bundle was planned for a different scenario");
    const int Tp = b.T_prime;
    if (Tp < 1) {
        add("bundle", 0, "horizon", "T' must be at least 1");
        return rep;
    }
    if (Tp < s.horizon) add("bundle", 0, "horizon", "T' " + std::to_string(Tp) + " is shorter than T");
    bool lengths_ok = true;
    for (std::size_t i = 0; i < nw; ++i)
        if (static_cast<int>(b.workers[i].actions.size()) != Tp - 1) {
            add(worker_name(s, i), 0, "plan length", std::to_string(b.workers[i].actions.size()) + " actions for T' " + std::to_string(Tp));
            lengths_ok = false;
        }
    for (std::size_t j = 0; j < nc; ++j)
        if (static_cast<int>(b.rechargers[j].actions.size()) != Tp - 1) {
            add(recharger_name(s, j), 0, "plan length", std::to_string(b.rechargers[j].actions.size()) + " actions for T' " + std::to_string(Tp));
            lengths_ok = false;
        }
    if (!lengths_ok) return rep;

    const Workspace& w = s.workspace;
    const std::size_t R = nw + nc;
    std::vector<std::vector<Cell>> pos(R);
    std::vector<const std::vector<Primitive>*> acts(R);
    std::vector<std::string> names(R);

    for (std::size_t i = 0; i < nw; ++i) {
        const auto& spec = s.workers[i];
        names[i] = worker_name(s, i);
        acts[i] = &b.workers[i].actions;
        RobotState st{spec.loop.home(), kStationary, spec.emax};
        LoopCursor cur{1};
        pos[i].push_back(st.p);
        for (int t = 0; t + 1 < Tp; ++t) {
            const auto& a = b.workers[i].actions[static_cast<std::size_t>(t)];
            if (const auto* m = std::get_if<MotionPrimitive>(&a)) {
                if (!allowed(spec.primitives, *m)) add(names[i], t, "primitive not allowed", m->name);
                for (Cell c : swept_cells(st.p, *m))
                    if (!w.is_free(c)) add(names[i], t, "obstacle", "swept cell " + to_string(c) + " is not free");
            }
            try {
                (void)apply(st, a, spec.emax, s.delta_max);
            } catch (const KinematicsError& e) {
                add(names[i], t, e.clause(), e.what());
            }
            try {
                cur = advance_cursor(cur, a, spec.loop);
            } catch (const KinematicsError& e) {
                add(names[i], t, e.clause(), e.what());
            }
            st = step_lenient(st, a);
            pos[i].push_back(st.p);
        }
        if (st.p != spec.loop.home() || cur.index != 1)
            add(names[i], Tp - 1, "position matching",
                "ends at " + to_string(st.p) + " with loop cursor " + std::to_string(cur.index));
        if (st.e != spec.emax)
            add(names[i], Tp - 1, "charge matching",
                "ends with " + std::to_string(st.e) + " of " + std::to_string(spec.emax));
        if (st.v != kStationary) add(names[i], Tp - 1, "velocity matching", "does not end stationary");
    }

    const std::set<Cell> P(s.potential_starts.begin(), s.potential_starts.end());
    for (std::size_t j = 0; j < nc; ++j) {
        const std::size_t r = nw + j;
        const auto& spec = s.rechargers[j];
        names[r] = recharger_name(s, j);
        acts[r] = &b.rechargers[j].actions;
        Cell at = b.recharger_starts[j];
        if (!P.count(at)) add(names[r], 0, "start not in P", to_string(at));
        if (!w.is_free(at)) add(names[r], 0, "obstacle", "starts on " + to_string(at));
        VelocityConfig v = kStationary;
        pos[r].push_back(at);
        for (int t = 0; t + 1 < Tp; ++t) {
            const auto& a = b.rechargers[j].actions[static_cast<std::size_t>(t)];
            if (std::holds_alternative<Recharge>(a)) add(names[r], t, "recharger cannot recharge", describe(a));
            if (const auto* m = std::get_if<MotionPrimitive>(&a)) {
                if (!allowed(spec.primitives, *m)) add(names[r], t, "primitive not allowed", m->name);
                if (m->v_from != v) add(names[r], t, "velocity precondition", m->name);
                for (Cell c : swept_cells(at, *m))
                    if (!w.is_free(c)) add(names[r], t, "obstacle", "swept cell " + to_string(c) + " is not free");
                at = at + m->disp;
                v = m->v_to;
            } else if (v != kStationary) {
                add(names[r], t, "velocity precondition", "wait while moving");
            }
            pos[r].push_back(at);
        }
        if (at != b.recharger_starts[j])
            add(names[r], Tp - 1, "recharger return", "ends at " + to_string(at) + ", started at " + to_string(b.recharger_starts[j]));
    }

    // Pairwise collisions over each step's footprint, or the single time point when T' = 1.
    for (int t = 0; t < std::max(1, Tp - 1); ++t) {
        std::map<Cell, std::size_t> owner;
        for (std::size_t r = 0; r < R; ++r) {
            const auto cells = Tp == 1 ? std::vector<Cell>{pos[r][0]}
                                       : occupancy(pos[r][static_cast<std::size_t>(t)], (*acts[r])[static_cast<std::size_t>(t)]);
            std::set<std::size_t> hit;
            for (Cell c : cells) {
                auto [it, fresh] = owner.emplace(c, r);
                if (!fresh && it->second != r && hit.insert(it->second).second)
                    add(names[r], t, "collision", "with " + names[it->second] + " at " + to_string(c));
            }
        }
    }

    // Recharge adjacency: every recharge needs an event naming a waiting, adjacent recharger.
    std::map<std::pair<int, int>, const RechargeEvent*> by_worker;
    std::map<std::pair<int, int>, int> served;
    for (const auto& e : b.events) {
        if (e.worker < 0 || e.worker >= static_cast<int>(nw) || e.recharger < 0 || e.recharger >= static_cast<int>(nc) ||
            e.step < 0 || e.step >= Tp - 1) {
            add("bundle", std::max(0, e.step), "event mismatch", "event refers to an unknown robot or step");
            continue;
        }
        if (!by_worker.emplace(std::make_pair(e.step, e.worker), &e).second)
            add(names[static_cast<std::size_t>(e.worker)], e.step, "event mismatch", "two events for one recharge");
        if (++served[{e.step, e.recharger}] == 2)
            add(names[nw + static_cast<std::size_t>(e.recharger)], e.step, "recharger double-booked", "serves two workers");
    }
    for (std::size_t i = 0; i < nw; ++i)
        for (int t = 0; t + 1 < Tp; ++t) {
            const auto& a = b.workers[i].actions[static_cast<std::size_t>(t)];
            const auto it = by_worker.find({t, static_cast<int>(i)});
            const auto* rc = std::get_if<Recharge>(&a);
            if (!rc) {
                if (it != by_worker.end()) add(names[i], t, "event mismatch", "event without a recharge action");
                continue;
            }
            if (it == by_worker.end()) {
                add(names[i], t, "recharge without recharger", "no serving recharger recorded");
                continue;
            }
            const auto& e = *it->second;
            const std::size_t r = nw + static_cast<std::size_t>(e.recharger);
            if (!std::holds_alternative<Wait>((*acts[r])[static_cast<std::size_t>(t)]))
                add(names[i], t, "recharge without recharger", names[r] + " is not waiting");
            else if (chebyshev(pos[r][static_cast<std::size_t>(t)], pos[i][static_cast<std::size_t>(t)]) > 1)
                add(names[i], t, "recharge without recharger", names[r] + " is not adjacent");
            if (e.delta != rc->delta) add(names[i], t, "event mismatch", "event amount differs from the action");
        }
    return rep;
}

double efficiency_percent(int workers, int horizon, std::int64_t W) {
    if (workers < 1 || horizon < 1) throw DomainError("efficiency needs at least one worker and one time point");
    const std::int64_t slots = static_cast<std::int64_t>(workers) * horizon;
    if (W < 0 || W > slots) throw DomainError("wait count outside [0, |R| * horizon]");
    return static_cast<double>(slots - W) / static_cast<double>(slots) * 100.0;
}

double slot_percent(std::int64_t count, int workers, int horizon) {
    if (workers < 1 || horizon < 1) throw DomainError("efficiency needs at least one worker and one time point");
    return static_cast<double>(count) / (static_cast<double>(workers) * horizon) * 100.0;
}

EfficiencyReport efficiency(const PlanBundle& b, const Scenario& s) {
    if (b.workers.size() != s.workers.size()) throw DomainError("bundle robot counts do not match the scenario");
    EfficiencyReport r;
    r.T = b.T;
    r.T_prime = b.T_prime;
    std::int64_t work = 0, recharge = 0;
    for (std::size_t i = 0; i < b.workers.size(); ++i) {
        WorkerEfficiency we;
        for (const auto& a : b.workers[i].actions) {
            if (std::holds_alternative<MotionPrimitive>(a)) ++we.work;
            else if (std::holds_alternative<Recharge>(a)) ++we.recharge;
            else ++we.wait;
        }
        we.loops = s.workers[i].loop.size() > 0 ? we.work / s.workers[i].loop.size() : 0;
        r.W += we.wait;
        work += we.work;
        recharge += we.recharge;
        r.workers.push_back(we);
    }
    for (const auto& rp : b.rechargers)
        for (const auto& a : rp.actions)
            if (const auto* m = std::get_if<MotionPrimitive>(&a)) r.U += m->cost;
    const auto nw = static_cast<int>(b.workers.size());
    if (nw > 0 && b.T_prime > 0) {
        r.E = efficiency_percent(nw, b.T_prime, r.W);
        r.work_percent = slot_percent(work, nw, b.T_prime);
        r.recharge_percent = slot_percent(recharge, nw, b.T_prime);
        if (b.T > 0) {
            const double slots_T = static_cast<double>(nw) * b.T;
            r.E_at_T = (slots_T - static_cast<double>(r.W)) / slots_T * 100.0;
        }
    }
    return r;
}

ReplayReport replay_hypercycles(const PlanBundle& b, const Scenario& s, int k) {
    if (k < 1) throw DomainError("replay needs at least one cycle");
    if (b.workers.size() != s.workers.size() || b.rechargers.size() != s.rechargers.size() ||
        b.recharger_starts.size() != s.rechargers.size())
        throw DomainError("bundle robot counts do not match the scenario");
    ReplayReport best;
    const int n = b.T_prime - 1;
    // Rechargers carry no battery, so their energy stays at zero.
    auto check = [&](const std::string& robot, RobotState st, const std::vector<Primitive>& acts, bool battery) {
        auto step_lenient = [battery](RobotState x, const Primitive& a) {
            x = mrp::step_lenient(x, a);
            if (!battery) x.e = 0;
            return x;
        };
        std::vector<RobotState> first{st};
        for (const auto& a : acts) first.push_back(step_lenient(first.back(), a));
        for (int c = 2; c <= k; ++c) {
            RobotState cur = st;
            // Cycle c starts where cycle c-1 ended.
            for (int q = 1; q < c; ++q)
                for (const auto& a : acts) cur = step_lenient(cur, a);
            for (int t = 0; t <= n; ++t) {
                if (t > 0) cur = step_lenient(cur, acts[static_cast<std::size_t>(t - 1)]);
                if (cur != first[static_cast<std::size_t>(t)]) {
                    if (best.ok || std::make_pair(c, t + 1) < std::make_pair(best.cycle, best.step)) {
                        best = {false, c, t + 1, robot};
                    }
                    return;
                }
            }
        }
    };
    for (std::size_t i = 0; i < s.workers.size(); ++i)
        check(worker_name(s, i), {s.workers[i].loop.home(), kStationary, s.workers[i].emax}, b.workers[i].actions, true);
    for (std::size_t j = 0; j < s.rechargers.size(); ++j)
        check(recharger_name(s, j), {b.recharger_starts[j], kStationary, 0}, b.rechargers[j].actions, false);
    return best;
}

std::string validation_to_json(const ValidationReport& r) {
    ojson j;
    j["ok"] = r.ok();
    ojson v = ojson::array();
    for (const auto& x : r.violations)
        v.push_back({{"robot", x.robot}, {"step", x.step}, {"clause", x.clause}, {"detail", x.detail}});
    j["violations"] = v;
    return j.dump(2) + "\n";
}

std::string efficiency_to_json(const EfficiencyReport& r) {
    ojson j;
    j["T"] = r.T;
    j["T_prime"] = r.T_prime;
    j["W"] = r.W;
    j["U"] = r.U;
    j["E"] = r.E;
    j["work_percent"] = r.work_percent;
    j["recharge_percent"] = r.recharge_percent;
    j["E_at_T"] = r.E_at_T;
    ojson w = ojson::array();
    for (const auto& x : r.workers)
        w.push_back({{"work", x.work}, {"recharge", x.recharge}, {"wait", x.wait}, {"loops", x.loops}});
    j["workers"] = w;
    return j.dump(2) + "\n";
}

std::string replay_to_json(const ReplayReport& r) {
    ojson j;
    j["ok"] = r.ok;
    if (!r.ok) j["divergence"] = {{"cycle", r.cycle}, {"step", r.step}, {"robot", r.robot}};
    return j.dump(2) + "\n";
}

std::string sync_to_json(const SyncReport& r) {
    ojson j;
    j["completed"] = r.completed;
    j["deadlock"] = r.deadlock;
    j["states_match"] = r.states_match;
    j["sync_messages_per_cycle"] = r.sync_messages_per_cycle;
    j["makespan"] = r.makespan;
    j["inflation"] = r.inflation;
    ojson bl = ojson::array();
    for (const auto& [a, b] : r.blocked) bl.push_back({{"robot", a}, {"waits_for", b}});
    j["blocked"] = bl;
    return j.dump(2) + "\n";
}

}  // namespace mrp
