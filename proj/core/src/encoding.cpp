#include "encoding.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "mrp/error.hpp"

namespace mrp::detail {

namespace {

std::string cell_tag(Cell c) { return std::to_string(c.x) + "_" + std::to_string(c.y); }

}  // namespace

std::vector<int> distances_from(const Workspace& w, const std::vector<Cell>& from,
                                const std::vector<MotionPrimitive>& prims) {
    const auto shapes = step_shapes(prims);
    return w.distance_field(from, shapes);
}

std::vector<Cell> service_region(const Workspace& w, const WorkingLoop& loop) {
    std::set<Cell> out;
    for (int k = 0; k < loop.size(); ++k)
        for (Cell q : w.neighborhood(loop.point(k))) out.insert(q);
    return {out.begin(), out.end()};
}

void forbid_shared_cells(Program& p, const std::vector<std::pair<Cell, Term>>& A,
                         const std::vector<std::pair<Cell, Term>>& B) {
    if (A.empty() || B.empty()) return;
    std::unordered_map<Cell, std::vector<Term>> by_cell;
    for (const auto& [c, t] : B) by_cell[c].push_back(t);
    for (const auto& [c, a] : A) {
        auto it = by_cell.find(c);
        if (it == by_cell.end()) continue;
        for (Term b : it->second) p.require(p.or_({p.not_(a), p.not_(b)}));
    }
}

namespace {

// Point occupancy at a time point and interior (swept, non-endpoint) occupancy
// during a step, for one robot.
struct Footprint {
    std::function<std::vector<std::pair<Cell, Term>>(int t)> points;
    std::function<std::vector<std::pair<Cell, Term>>(int step)> interior;
};

void forbid_collisions(Program& p, const Footprint& a, const Footprint& b, int T) {
    for (int t = 0; t < T; ++t) forbid_shared_cells(p, a.points(t), b.points(t));
    for (int t = 0; t + 1 < T; ++t) {
        const auto a0 = a.points(t), a1 = a.points(t + 1), b0 = b.points(t), b1 = b.points(t + 1);
        forbid_shared_cells(p, a0, b1);
        forbid_shared_cells(p, a1, b0);
        const auto ai = a.interior(t), bi = b.interior(t);
        if (ai.empty() && bi.empty()) continue;
        forbid_shared_cells(p, ai, b0);
        forbid_shared_cells(p, ai, b1);
        forbid_shared_cells(p, ai, bi);
        forbid_shared_cells(p, bi, a0);
        forbid_shared_cells(p, bi, a1);
    }
}

}  // namespace

// --- RechargerLayer ------------------------------------------------------

RechargerLayer::RechargerLayer(Program& p, const Scenario& s, Options o)
    : p_(p), s_(s), T_(o.T) {
    const Workspace& W = s.workspace;
    const int nc = static_cast<int>(s.rechargers.size());
    const int cells = W.cell_count();
    const int T = T_;
    auto blocked = [&](int step, Cell c) {
        return o.step_blocked && step >= 0 && step <= T - 2 && o.step_blocked(step, c);
    };
    auto pos_ok = [&](int t, Cell c) { return W.is_free(c) && !blocked(t - 1, c) && !blocked(t, c); };
    dom_.resize(static_cast<std::size_t>(nc));
    at_.resize(static_cast<std::size_t>(nc));
    act_.resize(static_cast<std::size_t>(nc));
    std::vector<Term> costs;

    for (int j = 0; j < nc; ++j) {
        const auto& prims = s.rechargers[static_cast<std::size_t>(j)].primitives;
        const int A = static_cast<int>(prims.size());
        auto move_ok = [&](int t, Cell c, int a) {
            const auto& m = prims[static_cast<std::size_t>(a)];
            for (Cell off : m.intermediate) {
                Cell q = c + off;
                if (!W.is_free(q) || blocked(t, q)) return false;
            }
            return pos_ok(t + 1, c + m.disp);
        };
        auto wait_ok = [&](int t, Cell c) { return !blocked(t, c) && pos_ok(t + 1, c); };

        // Forward reachability from the initial set, backward from the final set.
        std::vector<std::vector<char>> F(static_cast<std::size_t>(T), std::vector<char>(static_cast<std::size_t>(cells), 0));
        for (Cell c : o.initial[static_cast<std::size_t>(j)])
            if (W.in_bounds(c) && pos_ok(0, c)) F[0][static_cast<std::size_t>(W.id(c))] = 1;
        for (int t = 0; t + 1 < T; ++t)
            for (int id = 0; id < cells; ++id) {
                if (!F[t][id]) continue;
                Cell c = W.cell(id);
                if (wait_ok(t, c)) F[t + 1][id] = 1;
                for (int a = 0; a < A; ++a)
                    if (move_ok(t, c, a)) F[t + 1][static_cast<std::size_t>(W.id(c + prims[a].disp))] = 1;
            }
        std::vector<std::vector<char>> B(static_cast<std::size_t>(T), std::vector<char>(static_cast<std::size_t>(cells), 0));
        const bool any_final = j < static_cast<int>(o.final.size()) && !o.final[j].empty();
        if (any_final) {
            for (Cell c : o.final[static_cast<std::size_t>(j)])
                if (W.in_bounds(c) && F[T - 1][W.id(c)]) B[T - 1][static_cast<std::size_t>(W.id(c))] = 1;
        } else {
            B[T - 1] = F[T - 1];
        }
        for (int t = T - 2; t >= 0; --t)
            for (int id = 0; id < cells; ++id) {
                if (!F[t][id]) continue;
                Cell c = W.cell(id);
                bool ok = wait_ok(t, c) && B[t + 1][id];
                for (int a = 0; a < A && !ok; ++a)
                    ok = move_ok(t, c, a) && B[t + 1][static_cast<std::size_t>(W.id(c + prims[a].disp))];
                B[t][id] = ok;
            }

        auto& dom = dom_[j];
        auto& at = at_[j];
        dom.resize(static_cast<std::size_t>(T));
        at.assign(static_cast<std::size_t>(T), std::vector<Term>(static_cast<std::size_t>(cells), p.falsity()));
        for (int t = 0; t < T; ++t) {
            for (int id = 0; id < cells; ++id)
                if (B[t][id]) {
                    Cell c = W.cell(id);
                    dom[t].push_back(c);
                    at[t][id] = p.bool_var(o.prefix + std::to_string(j) + "_" + std::to_string(t) + "_" + cell_tag(c));
                }
            if (dom[t].empty()) feasible_ = false;
            p.require(p.exactly(at[t], 1));
        }

        auto& act = act_[j];
        act.assign(static_cast<std::size_t>(std::max(T - 1, 1)), std::vector<Term>(static_cast<std::size_t>(A + 1), p.falsity()));
        for (int t = 0; t + 1 < T; ++t) {
            // Create an action variable only when some domain cell can use it.
            for (int a = 0; a <= A; ++a) {
                bool used = false;
                for (Cell c : dom[t]) {
                    if (a == A ? (wait_ok(t, c) && B[t + 1][W.id(c)])
                               : (move_ok(t, c, a) && B[t + 1][W.id(c + prims[a].disp)])) {
                        used = true;
                        break;
                    }
                }
                if (used)
                    act[t][a] = p.bool_var(o.prefix + "a" + std::to_string(j) + "_" + std::to_string(t) + "_" + std::to_string(a));
            }
            p.require(p.exactly(act[t], 1));
            for (Cell c : dom[t]) {
                const Term here = at[t][W.id(c)];
                std::vector<Term> legal;
                for (int a = 0; a <= A; ++a) {
                    if (p.is_false(act[t][a])) continue;
                    Term target = p.falsity();
                    if (a == A) {
                        if (wait_ok(t, c)) target = at[t + 1][W.id(c)];
                    } else if (move_ok(t, c, a)) {
                        target = at[t + 1][W.id(c + prims[a].disp)];
                    }
                    p.require(p.or_({p.not_(here), p.not_(act[t][a]), target}));
                    if (!p.is_false(target)) legal.push_back(act[t][a]);
                }
                p.require(p.implies(here, p.or_(legal)));
            }
            // Each occupied cell at t+1 has a predecessor at t.
            for (Cell c2 : dom[t + 1]) {
                std::vector<Term> preds;
                if (wait_ok(t, c2)) preds.push_back(at[t][W.id(c2)]);
                for (int a = 0; a < A; ++a) {
                    Cell c = c2 - prims[a].disp;
                    if (W.in_bounds(c) && move_ok(t, c, a)) preds.push_back(at[t][W.id(c)]);
                }
                p.require(p.implies(at[t + 1][W.id(c2)], p.or_(preds)));
            }
            for (int a = 0; a < A; ++a)
                if (prims[a].cost > 0 && !p.is_false(act[t][a]))
                    costs.push_back(p.ite(act[t][a], p.constant(prims[a].cost), p.constant(0)));
        }
    }
    if (!feasible_) p.require(p.falsity());
    travel_ = p.add(costs);

    // Mutual collision avoidance.
    for (int j = 0; j < nc; ++j)
        for (int j2 = j + 1; j2 < nc; ++j2) {
            auto fp = [this](int r) {
                return Footprint{
                    [this, r](int t) {
                        std::vector<std::pair<Cell, Term>> v;
                        for (Cell c : dom_[r][t]) v.emplace_back(c, at(r, t, c));
                        return v;
                    },
                    [this, r](int step) { return occupancy(r, step); }};
            };
            forbid_collisions(p, fp(j), fp(j2), T);
        }
}

Term RechargerLayer::at(int j, int t, Cell c) const {
    const Workspace& W = s_.workspace;
    if (!W.in_bounds(c)) return p_.falsity();
    return at_[j][t][W.id(c)];
}

std::vector<std::pair<Cell, Term>> RechargerLayer::occupancy(int j, int step) const {
    // Interior swept cells only; endpoints are covered by the position literals.
    std::vector<std::pair<Cell, Term>> out;
    const auto& prims = s_.rechargers[static_cast<std::size_t>(j)].primitives;
    for (std::size_t a = 0; a < prims.size(); ++a) {
        const auto& m = prims[a];
        if (m.intermediate.size() <= 2 || p_.is_false(act_[j][step][a])) continue;
        for (Cell c : dom_[j][step]) {
            const Term cond = p_.and_({at(j, step, c), act_[j][step][a]});
            for (std::size_t k = 1; k + 1 < m.intermediate.size(); ++k)
                out.emplace_back(c + m.intermediate[k], cond);
        }
    }
    return out;
}

std::vector<Cell> RechargerLayer::positions(const smt::Model& m, int j) const {
    std::vector<Cell> out;
    for (int t = 0; t < T_; ++t) {
        std::optional<Cell> found;
        for (Cell c : dom_[j][t])
            if (smt::evaluate(p_, m, at(j, t, c))) found = c;
        if (!found) throw EncodingError("model places recharger " + std::to_string(j) + " nowhere at step " + std::to_string(t));
        out.push_back(*found);
    }
    return out;
}

std::vector<Primitive> RechargerLayer::actions(const smt::Model& m, int j) const {
    const auto& prims = s_.rechargers[static_cast<std::size_t>(j)].primitives;
    std::vector<Primitive> out;
    for (int t = 0; t + 1 < T_; ++t) {
        Primitive chosen = Wait{};
        for (std::size_t a = 0; a < prims.size(); ++a)
            if (smt::evaluate(p_, m, act_[j][t][a])) chosen = prims[a];
        out.push_back(chosen);
    }
    return out;
}

// --- JointEncoding ---------------------------------------------------------

JointEncoding::JointEncoding(const Scenario& s, JointOptions o) : s_(s), o_(o) {
    Program& p = p_;
    const Workspace& W = s.workspace;
    const int T = o.T;
    if (T < 2) throw DomainError("horizon must have at least two time points");
    const int nw = static_cast<int>(s.workers.size());
    const int nc = static_cast<int>(s.rechargers.size());

    RechargerLayer::Options lo;
    lo.T = T;
    lo.initial.assign(static_cast<std::size_t>(nc), s.potential_starts);
    if (o.recharger_return) lo.final.assign(static_cast<std::size_t>(nc), s.potential_starts);
    layer_ = std::make_unique<RechargerLayer>(p, s, lo);
    const RechargerLayer& R = *layer_;

    cur_.resize(static_cast<std::size_t>(nw));
    e_.resize(static_cast<std::size_t>(nw));
    mv_.resize(static_cast<std::size_t>(nw));
    rc_.resize(static_cast<std::size_t>(nw));
    srv_.assign(static_cast<std::size_t>(nw), std::vector<std::vector<Term>>(static_cast<std::size_t>(nc)));
    std::vector<Term> waits, recharges;

    for (int i = 0; i < nw; ++i) {
        const auto& wk = s.workers[static_cast<std::size_t>(i)];
        const auto& L = wk.loop;
        const int m = L.size();
        const std::string id = std::to_string(i);
        auto& cur = cur_[i];
        cur.assign(static_cast<std::size_t>(T), std::vector<Term>(static_cast<std::size_t>(m), p.falsity()));
        for (int t = 0; t < T; ++t) {
            for (int k = 0; k < m; ++k) {
                const bool fwd = k <= t;
                const bool bwd = (m - k) % m <= T - 1 - t;
                if (!fwd || !bwd) continue;
                cur[t][k] = t == 0 ? p.truth() : p.bool_var("c" + id + "_" + std::to_string(t) + "_" + std::to_string(k));
            }
            p.require(p.exactly(cur[t], 1));
        }
        auto& e = e_[i];
        e.push_back(p.constant(wk.emax));
        for (int t = 1; t < T; ++t) e.push_back(p.int_var("e" + id + "_" + std::to_string(t), 0, wk.emax));
        auto& mv = mv_[i];
        auto& rc = rc_[i];
        bool uniform = true;
        for (int k = 1; k < m; ++k) uniform = uniform && L.move(k).cost == L.move(0).cost;
        for (int t = 0; t + 1 < T; ++t) {
            const std::string ts = id + "_" + std::to_string(t);
            mv.push_back(t == 0 && T - 1 >= m ? p.truth() : p.bool_var("mv" + ts));
            rc.push_back(t == 0 ? p.falsity() : p.bool_var("rc" + ts));
            p.require(p.not_(p.and_({mv[t], rc[t]})));
            for (int k = 0; k < m; ++k) {
                if (p.is_false(cur[t][k])) continue;
                p.require(p.implies(p.and_({cur[t][k], mv[t]}), cur[t + 1][(k + 1) % m]));
                p.require(p.implies(p.and_({cur[t][k], p.not_(mv[t])}), cur[t + 1][k]));
                if (!uniform)
                    p.require(p.implies(p.and_({cur[t][k], mv[t]}),
                                        p.eq(e[t + 1], p.sub(e[t], p.constant(L.move(k).cost)))));
            }
            if (uniform) p.require(p.implies(mv[t], p.eq(e[t + 1], p.sub(e[t], p.constant(L.move(0).cost)))));
            const Term idle = p.and_({p.not_(mv[t]), p.not_(rc[t])});
            p.require(p.implies(idle, p.eq(e[t + 1], e[t])));
            p.require(p.implies(rc[t], p.and_({p.lt(e[t], p.constant(wk.emax)), p.lt(e[t], e[t + 1]),
                                               p.le(e[t + 1], p.add({e[t], p.constant(s.delta_max)}))})));
            waits.push_back(idle);
            recharges.push_back(rc[t]);
        }
        if (o.charge_matching) p.require(p.eq(e[T - 1], p.constant(wk.emax)));

        // Service: a recharging worker is served by exactly one waiting, adjacent recharger.
        for (int j = 0; j < nc; ++j) {
            auto& srv = srv_[i][j];
            for (int t = 0; t + 1 < T; ++t)
                srv.push_back(p.is_false(rc[t]) ? p.falsity()
                                                : p.bool_var("s" + id + "_" + std::to_string(j) + "_" + std::to_string(t)));
        }
        for (int t = 0; t + 1 < T; ++t) {
            if (p.is_false(rc[t])) continue;
            std::vector<Term> any;
            for (int j = 0; j < nc; ++j) {
                const Term sv = srv_[i][j][t];
                any.push_back(sv);
                p.require(p.implies(sv, rc[t]));
                p.require(p.implies(sv, R.waits(j, t)));
                for (int k = 0; k < m; ++k) {
                    if (p.is_false(cur[t][k])) continue;
                    std::vector<Term> near;
                    for (Cell q : W.neighborhood(L.point(k))) near.push_back(R.at(j, t, q));
                    p.require(p.implies(p.and_({sv, cur[t][k]}), p.or_(near)));
                }
            }
            p.require(p.implies(rc[t], p.or_(any)));
            if (nc > 1) p.require(p.at_most(any, 1));
        }
    }
    for (int j = 0; j < nc && nw > 1; ++j)
        for (int t = 0; t + 1 < T; ++t) {
            std::vector<Term> served;
            for (int i = 0; i < nw; ++i) served.push_back(srv_[i][j][t]);
            p.require(p.at_most(served, 1));
        }

    // Worker/recharger collision avoidance.
    for (int i = 0; i < nw; ++i) {
        const auto& L = s.workers[static_cast<std::size_t>(i)].loop;
        Footprint wf{[this, i, &L](int t) {
                         std::vector<std::pair<Cell, Term>> v;
                         for (int k = 0; k < L.size(); ++k)
                             if (!p_.is_false(cur_[i][t][k])) v.emplace_back(L.point(k), cur_[i][t][k]);
                         return v;
                     },
                     [this, i, &L](int step) {
                         std::vector<std::pair<Cell, Term>> v;
                         for (int k = 0; k < L.size(); ++k) {
                             const auto& im = L.move(k).intermediate;
                             if (im.size() <= 2 || p_.is_false(cur_[i][step][k])) continue;
                             const Term cond = p_.and_({cur_[i][step][k], mv_[i][step]});
                             for (std::size_t q = 1; q + 1 < im.size(); ++q) v.emplace_back(L.point(k) + im[q], cond);
                         }
                         return v;
                     }};
        for (int j = 0; j < nc; ++j) {
            Footprint rf{[this, j](int t) {
                             std::vector<std::pair<Cell, Term>> v;
                             for (Cell c : layer_->domain(j, t)) v.emplace_back(c, layer_->at(j, t, c));
                             return v;
                         },
                         [this, j](int step) { return layer_->occupancy(j, step); }};
            forbid_collisions(p, wf, rf, T);
        }
    }

    // Two rechargers never share a start cell (also implied by collision avoidance).
    for (Cell c : s.potential_starts) {
        std::vector<Term> here;
        for (int j = 0; j < nc; ++j) here.push_back(R.at(j, 0, c));
        p.require(p.at_most(here, 1));
    }
    if (o.recharger_return)
        for (int j = 0; j < nc; ++j)
            for (Cell c : s.potential_starts) p.require(p.iff(R.at(j, T - 1, c), R.at(j, 0, c)));

    if (o.symmetry_breaking) {
        // Interchangeable rechargers start in increasing order of P index.
        for (int j = 0; j + 1 < nc; ++j) {
            if (s.rechargers[j].primitives != s.rechargers[j + 1].primitives) continue;
            std::vector<Term> a, b;
            for (std::size_t k = 0; k < s.potential_starts.size(); ++k) {
                const Cell c = s.potential_starts[k];
                a.push_back(p.ite(R.at(j, 0, c), p.constant(static_cast<std::int64_t>(k)), p.constant(0)));
                b.push_back(p.ite(R.at(j + 1, 0, c), p.constant(static_cast<std::int64_t>(k)), p.constant(0)));
            }
            p.require(p.lt(p.add(a), p.add(b)));
        }
    }

    if (o.distance_hints && nw > 1) {
        // A recharger cannot be near two workers' loops closer in time than
        // the travel distance between the loops' service regions.
        std::vector<std::vector<Cell>> region;
        for (const auto& wk : s.workers) region.push_back(service_region(W, wk.loop));
        for (int j = 0; j < nc; ++j) {
            std::vector<std::vector<Term>> rv(static_cast<std::size_t>(nw));
            for (int i = 0; i < nw; ++i)
                for (int t = 0; t < T; ++t) {
                    std::vector<Term> in;
                    for (Cell q : region[i]) in.push_back(R.at(j, t, q));
                    Term disj = p.or_(in);
                    Term v = disj;
                    if (!p.is_const(disj)) {
                        v = p.bool_var("rv" + std::to_string(j) + "_" + std::to_string(i) + "_" + std::to_string(t));
                        p.require(p.iff(v, disj));
                    }
                    rv[i].push_back(v);
                    if (t + 1 < T) p.require(p.implies(srv_[i][j][t], v));
                }
            const auto& prims = s.rechargers[static_cast<std::size_t>(j)].primitives;
            for (int i = 0; i < nw; ++i) {
                const auto dist = distances_from(W, region[i], prims);
                for (int i2 = 0; i2 < nw; ++i2) {
                    if (i2 == i) continue;
                    int dd = -1;
                    for (Cell q : region[i2]) {
                        int d = dist[static_cast<std::size_t>(W.id(q))];
                        if (d >= 0 && (dd < 0 || d < dd)) dd = d;
                    }
                    if (dd < 0) dd = T;  // never both
                    for (int t = 0; t < T; ++t)
                        for (int t2 = t + 1; t2 < std::min(T, t + dd); ++t2)
                            p.require(p.or_({p.not_(rv[i][t]), p.not_(rv[i2][t2])}));
                }
            }
        }
    }

    wait_total_ = p.count(waits);
    recharge_total_ = p.count(recharges);
    if (o.mode == ObjectiveMode::Lexicographic) {
        p.minimize(wait_total_, "W");
        if (o.prefer_moves) p.minimize(recharge_total_, "recharge_steps");
        if (o.minimize_travel) p.minimize(R.travel_cost(), "U");
    } else {
        p.minimize(p.add({p.mul(o.w1, wait_total_), p.mul(o.w2, R.travel_cost())}), "weighted");
    }
}

JointEncoding::Plans JointEncoding::extract(const smt::Model& m) const {
    Plans out;
    const int T = o_.T;
    const int nw = static_cast<int>(s_.workers.size());
    const int nc = static_cast<int>(s_.rechargers.size());
    std::vector<std::vector<Cell>> pos;
    for (int j = 0; j < nc; ++j) {
        pos.push_back(layer_->positions(m, j));
        out.rechargers.push_back(layer_->actions(m, j));
        out.recharger_starts.push_back(pos.back().front());
    }
    for (int i = 0; i < nw; ++i) {
        const auto& L = s_.workers[static_cast<std::size_t>(i)].loop;
        std::vector<Primitive> acts;
        for (int t = 0; t + 1 < T; ++t) {
            int k = -1;
            for (int q = 0; q < L.size(); ++q)
                if (smt::evaluate(p_, m, cur_[i][t][q])) k = q;
            if (k < 0) throw EncodingError("model has no cursor for worker " + std::to_string(i));
            if (smt::evaluate(p_, m, mv_[i][t])) {
                acts.push_back(L.move(k));
            } else if (smt::evaluate(p_, m, rc_[i][t])) {
                const Energy d = smt::evaluate(p_, m, e_[i][t + 1]) - smt::evaluate(p_, m, e_[i][t]);
                acts.push_back(Recharge{d});
                for (int j = 0; j < nc; ++j)
                    if (smt::evaluate(p_, m, srv_[i][j][t]))
                        out.events.push_back({t, i, j, d, L.point(k), pos[j][t]});
            } else {
                acts.push_back(Wait{});
            }
        }
        out.workers.push_back(std::move(acts));
    }
    std::sort(out.events.begin(), out.events.end(),
              [](const RechargeEvent& a, const RechargeEvent& b) {
                  return std::tie(a.step, a.worker) < std::tie(b.step, b.worker);
              });
    return out;
}

}  // namespace mrp::detail
