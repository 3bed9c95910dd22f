#include "mrp/twoshot.hpp"

#include <algorithm>
#include <set>

#include "encoding.hpp"
#include "json.hpp"
#include "mrp/error.hpp"

namespace mrp {

namespace {

std::string attribute_infeasibility(const Scenario& s, smt::Status st) {
    if (st == smt::Status::Timeout) return "phase 1 found no plan within its time budget";
    if (s.potential_starts.empty()) return "no potential start cells for rechargers";
    if (s.potential_starts.size() < s.rechargers.size())
        return "fewer potential start cells than rechargers";
    for (const auto& w : s.workers) {
        const auto region = detail::service_region(s.workspace, w.loop);
        bool reachable = false;
        for (const auto& r : s.rechargers) {
            const auto dist = detail::distances_from(s.workspace, s.potential_starts, r.primitives);
            for (Cell q : region)
                if (dist[static_cast<std::size_t>(s.workspace.id(q))] >= 0) reachable = true;
        }
        if (!reachable) return "worker " + std::to_string(w.id) + " cannot be reached by any recharger";
    }
    return "phase-1 constraints are unsatisfiable";
}

// Recharger-only encoding over an extended horizon.
class PhaseTwoEncoding {
public:
    PhaseTwoEncoding(const Scenario& s, const PhaseOneResult& p1, int Tp, bool with_objective)
        : s_(s), p1_(p1), Tp_(Tp) {
        using detail::Term;
        auto& p = p_;
        const Workspace& W = s.workspace;
        const int T = p1.T;
        const int nw = static_cast<int>(s.workers.size());
        const int nc = static_cast<int>(s.rechargers.size());
        if (Tp < T || Tp < 2) {
            p.require(p.falsity());
            return;
        }
        // Static worker occupancy per step.
        std::vector<std::vector<char>> busy(static_cast<std::size_t>(Tp), std::vector<char>(static_cast<std::size_t>(W.cell_count()), 0));
        for (int i = 0; i < nw; ++i) {
            const auto& wk = s.workers[static_cast<std::size_t>(i)];
            Cell at = wk.loop.home();
            std::vector<Cell> pos{at};
            const auto& plan = p1.worker_plans[static_cast<std::size_t>(i)];
            for (int t = 0; t + 1 < Tp; ++t) {
                if (t < static_cast<int>(plan.size()))
                    if (const auto* m = std::get_if<MotionPrimitive>(&plan[static_cast<std::size_t>(t)])) {
                        for (Cell off : m->intermediate) busy[t][static_cast<std::size_t>(W.id(at + off))] = 1;
                        at = at + m->disp;
                    }
                pos.push_back(at);
            }
            for (int t = 0; t + 1 < Tp; ++t) {
                busy[t][static_cast<std::size_t>(W.id(pos[t]))] = 1;
                busy[t][static_cast<std::size_t>(W.id(pos[t + 1]))] = 1;
            }
        }
        detail::RechargerLayer::Options lo;
        lo.T = Tp;
        lo.prefix = "q";
        for (int j = 0; j < nc; ++j) {
            lo.initial.push_back({p1.recharger_starts[static_cast<std::size_t>(j)]});
            lo.final.push_back({p1.recharger_starts[static_cast<std::size_t>(j)]});
        }
        lo.step_blocked = [busy = std::move(busy), &W](int step, Cell c) {
            return busy[static_cast<std::size_t>(step)][static_cast<std::size_t>(W.id(c))] != 0;
        };
        layer_ = std::make_unique<detail::RechargerLayer>(p, s, lo);
        const auto& R = *layer_;

        auto near = [&](int j, int t, Cell c) {
            std::vector<Term> v;
            for (Cell q : W.neighborhood(c)) v.push_back(R.at(j, t, q));
            return p.or_(v);
        };
        // Pinned phase-1 service instants.
        std::set<std::pair<int, int>> pinned;
        for (int j = 0; j < nc; ++j)
            for (const auto& inst : p1.eta[static_cast<std::size_t>(j)]) {
                p.require(R.waits(j, inst.step));
                p.require(near(j, inst.step, inst.cell));
                pinned.insert({j, inst.step});
            }
        // Final refill blocks: some recharger waits next to the worker's home for d steps.
        std::vector<std::vector<std::vector<Term>>> cover(static_cast<std::size_t>(nc), std::vector<std::vector<Term>>(static_cast<std::size_t>(Tp)));
        for (int i = 0; i < nw; ++i) {
            const auto& z = p1.zeta[static_cast<std::size_t>(i)];
            if (z.d == 0) continue;
            const Cell home = s.workers[static_cast<std::size_t>(i)].loop.home();
            std::vector<Term> options;
            for (int j = 0; j < nc; ++j)
                for (int st = z.tau; st + z.d <= Tp - 1; ++st) {
                    bool clash = false;
                    for (int t = st; t < st + z.d; ++t) clash = clash || pinned.count({j, t});
                    if (clash) continue;
                    const Term b = p.bool_var("blk" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(st));
                    std::vector<Term> body;
                    for (int t = st; t < st + z.d; ++t) {
                        body.push_back(R.waits(j, t));
                        body.push_back(near(j, t, home));
                        cover[j][t].push_back(b);
                    }
                    p.require(p.implies(b, p.and_(body)));
                    options.push_back(b);
                    blocks_.push_back({i, j, st, b});
                }
            p.require(p.exactly(options, 1));
        }
        for (int j = 0; j < nc; ++j)
            for (int t = 0; t < Tp; ++t)
                if (cover[j][t].size() > 1) p.require(p.at_most(cover[j][t], 1));
        if (with_objective) p.minimize(R.travel_cost(), "U");
    }

    const smt::Program& program() const { return p_; }

    PlanBundle bundle(const smt::Model& m) const {
        const int nw = static_cast<int>(s_.workers.size());
        const int nc = static_cast<int>(s_.rechargers.size());
        std::vector<std::vector<Primitive>> workers, rechargers;
        std::vector<std::vector<Cell>> pos;
        for (int j = 0; j < nc; ++j) {
            rechargers.push_back(layer_->actions(m, j));
            pos.push_back(layer_->positions(m, j));
        }
        std::vector<RechargeEvent> events;
        for (auto e : p1_.events) {
            e.recharger_cell = pos[static_cast<std::size_t>(e.recharger)][static_cast<std::size_t>(e.step)];
            events.push_back(e);
        }
        for (int i = 0; i < nw; ++i) {
            auto acts = p1_.worker_plans[static_cast<std::size_t>(i)];
            acts.resize(static_cast<std::size_t>(Tp_ - 1), Wait{});
            workers.push_back(std::move(acts));
        }
        for (const auto& b : blocks_) {
            if (!smt::evaluate(p_, m, b.var)) continue;
            const auto& wk = s_.workers[static_cast<std::size_t>(b.worker)];
            const auto& z = p1_.zeta[static_cast<std::size_t>(b.worker)];
            Energy left = wk.emax - z.energy_at_tau;
            for (int t = b.start; t < b.start + z.d; ++t) {
                const Energy d = std::min(left, s_.delta_max);
                left -= d;
                workers[static_cast<std::size_t>(b.worker)][static_cast<std::size_t>(t)] = Recharge{d};
                events.push_back({t, b.worker, b.recharger, d, wk.loop.home(),
                                  pos[static_cast<std::size_t>(b.recharger)][static_cast<std::size_t>(t)]});
            }
        }
        return assemble_bundle(s_, "twoshot", Tp_, std::move(workers), std::move(rechargers),
                               p1_.recharger_starts, std::move(events));
    }

private:
    struct Block {
        int worker, recharger, start;
        detail::Term var;
    };
    const Scenario& s_;
    const PhaseOneResult& p1_;
    int Tp_;
    smt::Program p_;
    std::unique_ptr<detail::RechargerLayer> layer_;
    std::vector<Block> blocks_;
};

}  // namespace

PhaseOneResult phase_one(const Scenario& s, const TwoShotOptions& o) {
    validate_scenario(s);
    PhaseOneResult r;
    r.T = s.horizon;
    detail::JointOptions jo;
    jo.T = s.horizon;
    jo.charge_matching = false;
    jo.recharger_return = false;
    jo.prefer_moves = true;
    jo.minimize_travel = false;
    jo.mode = ObjectiveMode::Lexicographic;
    jo.distance_hints = o.distance_hints;
    jo.symmetry_breaking = o.symmetry_breaking;
    detail::JointEncoding enc(s, jo);
    auto cfg = o.solver;
    cfg.timeout_seconds = o.phase_one_seconds;
    cfg.descent = o.phase_one_descent;
    const auto out = smt::solve(enc.program(), cfg);
    r.status = out.status;
    r.seconds = out.wall_seconds;
    if (!out.model) {
        r.diagnostic = attribute_infeasibility(s, out.status);
        return r;
    }
    auto plans = enc.extract(*out.model);
    r.W = out.objective_values.front();
    r.recharger_plans = std::move(plans.rechargers);
    r.recharger_starts = std::move(plans.recharger_starts);
    r.eta.resize(s.rechargers.size());
    for (std::size_t i = 0; i < s.workers.size(); ++i) {
        auto acts = std::move(plans.workers[i]);
        int tau = 0;
        for (std::size_t t = 0; t < acts.size(); ++t)
            if (std::holds_alternative<MotionPrimitive>(acts[t])) tau = static_cast<int>(t) + 1;
        Energy e = s.workers[i].emax;
        for (std::size_t t = 0; t < acts.size(); ++t) {
            if (static_cast<int>(t) >= tau) {
                acts[t] = Wait{};
                continue;
            }
            if (const auto* m = std::get_if<MotionPrimitive>(&acts[t])) e -= m->cost;
            if (const auto* rc = std::get_if<Recharge>(&acts[t])) e += rc->delta;
        }
        r.zeta.push_back({tau, recharge_steps_needed(e, s.workers[i].emax, s.delta_max), e});
        r.worker_plans.push_back(std::move(acts));
    }
    for (const auto& ev : plans.events) {
        if (ev.step >= r.zeta[static_cast<std::size_t>(ev.worker)].tau) continue;
        r.events.push_back(ev);
        r.eta[static_cast<std::size_t>(ev.recharger)].push_back({ev.step, ev.cell, ev.worker});
    }
    return r;
}

smt::Program encode_phase_two(const Scenario& s, const PhaseOneResult& p1, int T_prime,
                              bool with_objective) {
    return PhaseTwoEncoding(s, p1, T_prime, with_objective).program();
}

smt::Status check_phase_two(const Scenario& s, const PhaseOneResult& p1, int T_prime,
                            const smt::SolverConfig& cfg) {
    if (T_prime < p1.T) return smt::Status::Unsatisfiable;
    PhaseTwoEncoding enc(s, p1, T_prime, false);
    return smt::solve(enc.program(), cfg).status;
}

PhaseTwoResult phase_two(const Scenario& s, const PhaseOneResult& p1, const TwoShotOptions& o) {
    if (p1.worker_plans.size() != s.workers.size())
        throw DomainError("phase-1 result has no plan for this scenario");
    const int T = p1.T;
    const int cap = o.t_prime_cap.value_or(T + 4 * std::max(s.workspace.width(), s.workspace.height()));
    // No refill block fits before tau + d + 1 time points.
    int lb = T;
    for (const auto& z : p1.zeta)
        if (z.d > 0) lb = std::max(lb, z.tau + z.d + 1);
    const auto& from = p1.recharger_starts.empty() ? s.potential_starts : p1.recharger_starts;
    for (std::size_t i = 0; i < s.workers.size() && i < p1.zeta.size(); ++i) {
        if (p1.zeta[i].d == 0) continue;
        bool reachable = false;
        for (const auto& rc : s.rechargers) {
            const auto dist = detail::distances_from(s.workspace, from, rc.primitives);
            for (Cell q : detail::service_region(s.workspace, s.workers[i].loop))
                reachable = reachable || dist[static_cast<std::size_t>(s.workspace.id(q))] >= 0;
        }
        if (!reachable)
            throw PlanningError("phase 2: worker " + std::to_string(s.workers[i].id) +
                                " needs charge but cannot be reached by any recharger");
    }
    PhaseTwoResult r;
    auto base_cfg = o.solver;
    if (!base_cfg.dump_path.empty()) base_cfg.dump_path += ".phase2";
    auto probe_cfg = base_cfg;
    probe_cfg.timeout_seconds = o.probe_seconds;
    for (int Tp = lb; Tp <= cap; ++Tp) {
        PhaseTwoEncoding probe(s, p1, Tp, false);
        auto out = smt::solve(probe.program(), probe_cfg);
        r.probed.push_back(Tp);
        if (!out.model) {
            if (out.status == smt::Status::Timeout) r.minimality_proven = false;
            continue;
        }
        smt::Status travel = smt::Status::Satisfiable;
        if (o.minimize_travel) {
            PhaseTwoEncoding opt(s, p1, Tp, true);
            auto cfg = base_cfg;
            cfg.timeout_seconds = o.travel_seconds;
            auto best = smt::solve(opt.program(), cfg);
            if (best.model) {
                r.travel_status = best.status;
                r.bundle = opt.bundle(*best.model);
            } else {
                r.travel_status = smt::Status::Satisfiable;
                r.bundle = probe.bundle(*out.model);
            }
            travel = r.travel_status;
        } else {
            r.travel_status = travel;
            r.bundle = probe.bundle(*out.model);
        }
        r.bundle.solve_status = (p1.status == smt::Status::Optimal && travel == smt::Status::Optimal &&
                                 r.minimality_proven)
                                    ? "optimal"
                                    : "satisfiable";
        return r;
    }
    throw PlanningError("phase 2: no extended hypercycle up to T' = " + std::to_string(cap));
}

CertificateReport certify_loop_counts(const Scenario& s, const PlanBundle& b,
                                      const std::vector<WorkerResidual>& zeta) {
    if (zeta.size() != s.workers.size()) throw DomainError("one residual per worker expected");
    CertificateReport r;
    r.certified = true;
    for (std::size_t i = 0; i < s.workers.size(); ++i) {
        const int margin = s.workers[i].loop.size() - (b.T_prime - 1 - zeta[i].tau);
        r.margins.push_back(margin);
        r.certified = r.certified && margin > 0;
    }
    return r;
}

TwoShotResult plan_twoshot(const Scenario& s, const TwoShotOptions& o) {
    TwoShotResult r;
    r.phase1 = phase_one(s, o);
    if (r.phase1.status == smt::Status::Unsatisfiable || r.phase1.status == smt::Status::Timeout)
        throw PlanningError("phase 1: " + r.phase1.diagnostic);
    r.phase2 = phase_two(s, r.phase1, o);
    r.certificate = certify_loop_counts(s, r.phase2.bundle, r.phase1.zeta);
    return r;
}

std::string phase_one_to_json(const PhaseOneResult& r) {
    using ojson = nlohmann::ordered_json;
    ojson j;
    j["status"] = smt::to_string(r.status);
    j["T"] = r.T;
    j["W"] = r.W;
    j["seconds"] = r.seconds;
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    ojson starts = ojson::array();
    for (Cell c : r.recharger_starts) starts.push_back({c.x, c.y});
    j["recharger_starts"] = starts;
    ojson eta = ojson::array();
    for (const auto& per : r.eta) {
        ojson v = ojson::array();
        for (const auto& inst : per)
            v.push_back({{"step", inst.step}, {"cell", {inst.cell.x, inst.cell.y}}, {"worker", inst.worker}});
        eta.push_back(v);
    }
    j["eta"] = eta;
    ojson zeta = ojson::array();
    for (const auto& z : r.zeta) zeta.push_back({{"tau", z.tau}, {"d", z.d}, {"energy_at_tau", z.energy_at_tau}});
    j["zeta"] = zeta;
    ojson plans = ojson::array();
    for (const auto& p : r.worker_plans) {
        ojson v = ojson::array();
        for (const auto& a : p) v.push_back(describe(a));
        plans.push_back(v);
    }
    j["worker_plans"] = plans;
    ojson rplans = ojson::array();
    for (const auto& p : r.recharger_plans) {
        ojson v = ojson::array();
        for (const auto& a : p) v.push_back(describe(a));
        rplans.push_back(v);
    }
    j["recharger_plans"] = rplans;
    return j.dump(2) + "\n";
}

}  // namespace mrp
