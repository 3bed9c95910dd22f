#include "mrp/greedy.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <tuple>
#include <unordered_map>

#include "mrp/error.hpp"

namespace mrp {

namespace {

// Loop move indices the worker still intends to make, in order.
std::vector<int> planned_moves(const Scenario& s, const GreedyState& g, int i) {
    const auto& w = g.workers[static_cast<std::size_t>(i)];
    const int m = s.workers[static_cast<std::size_t>(i)].loop.size();
    std::vector<int> out;
    int k = w.cursor;
    if (k != 0)
        for (; k < m; ++k) out.push_back(k);
    if (g.extension) return out;
    int left = s.horizon - 1 - g.step - static_cast<int>(out.size());
    while (left >= m) {
        for (int q = 0; q < m; ++q) out.push_back(q);
        left -= m;
    }
    return out;
}

// Next move the worker wants to make this step, if any.
std::optional<int> intent(const Scenario& s, const GreedyState& g, int i) {
    const auto& w = g.workers[static_cast<std::size_t>(i)];
    const auto& loop = s.workers[static_cast<std::size_t>(i)].loop;
    const int m = loop.size();
    if (m == 0) return std::nullopt;
    if (w.cursor == 0 && (g.extension || s.horizon - 1 - g.step < m)) return std::nullopt;
    if (w.state.e < loop.move(w.cursor).cost) return std::nullopt;
    return w.cursor;
}

std::set<Cell> all_loop_cells(const Scenario& s) {
    std::set<Cell> out;
    for (const auto& w : s.workers)
        for (Cell c : w.loop.cells()) out.insert(c);
    return out;
}

std::vector<Cell> service_targets(const Workspace& ws, Cell stop) {
    std::vector<Cell> out;
    for (Cell c : ws.neighborhood(stop))
        if (c != stop) out.push_back(c);
    return out;
}

const MotionPrimitive* primitive_for(const std::vector<MotionPrimitive>& prims, Cell disp) {
    for (const auto& p : prims)
        if (p.disp == disp) return &p;
    return nullptr;
}

// Sends idle rechargers home once the workers are parked for good. Each one
// in turn gets a shortest space-time path that keeps clear of the footprints
// already reserved; a recharger that finds none moves to the front and the
// order is retried. Returns per-recharger step shapes, all of equal length.
using Homing = std::vector<std::vector<const MotionPrimitive*>>;

std::optional<Homing> plan_homing_prioritized(const Scenario& s, const std::vector<Cell>& from,
                                              const std::set<Cell>& parked) {
    const Workspace& ws = s.workspace;
    const int nc = static_cast<int>(from.size());
    const int span = static_cast<int>(ws.free_cells().size()) * 2 + 4;
    std::vector<int> order(static_cast<std::size_t>(nc));
    for (int j = 0; j < nc; ++j) order[static_cast<std::size_t>(j)] = j;
    for (int attempt = 0; attempt < 4 * nc + 4; ++attempt) {
        // reserved[t]: cells touched during step t; parked_at[c]: first step a finished recharger holds c
        std::vector<std::set<Cell>> reserved;
        std::map<Cell, int> parked_at;
        Homing moves(static_cast<std::size_t>(nc));
        int failed = -1;
        std::set<Cell> waiting(from.begin(), from.end());
        for (int j : order) {
            waiting.erase(from[static_cast<std::size_t>(j)]);
            const Cell home = s.potential_starts[static_cast<std::size_t>(j)];
            const auto& prims = s.rechargers[static_cast<std::size_t>(j)].primitives;
            const int limit = static_cast<int>(reserved.size()) + span;
            auto free_at = [&](Cell c, int t) {
                if (parked.count(c) || (t == 0 && waiting.count(c))) return false;
                if (auto it = parked_at.find(c); it != parked_at.end() && t >= it->second) return false;
                return t >= static_cast<int>(reserved.size()) || !reserved[static_cast<std::size_t>(t)].count(c);
            };
            auto settled = [&](Cell c, int t) {
                for (int u = t; u < static_cast<int>(reserved.size()); ++u)
                    if (reserved[static_cast<std::size_t>(u)].count(c)) return false;
                return true;
            };
            // BFS over (cell, t); per layer, the cell each one was reached from
            // and the primitive taken (nullptr for a wait).
            const std::size_t ncell = static_cast<std::size_t>(ws.width() * ws.height());
            std::vector<std::vector<std::pair<int, const MotionPrimitive*>>> parent;
            std::vector<Cell> layer{from[static_cast<std::size_t>(j)]};
            std::optional<int> arrive;
            for (int t = 0; t <= limit && !layer.empty() && !arrive; ++t) {
                std::vector<std::pair<int, const MotionPrimitive*>> seen(ncell, {-1, nullptr});
                std::vector<Cell> next;
                for (Cell c : layer) {
                    if (c == home && settled(c, t)) {
                        arrive = t;
                        break;
                    }
                    auto push = [&](Cell to, const MotionPrimitive* mv, const std::vector<Cell>& foot) {
                        for (Cell f : foot)
                            if (!ws.is_free(f) || !free_at(f, t)) return;
                        auto& slot = seen[static_cast<std::size_t>(ws.id(to))];
                        if (slot.first >= 0) return;
                        slot = {ws.id(c), mv};
                        next.push_back(to);
                    };
                    push(c, nullptr, {c});
                    for (const auto& mv : prims) push(c + mv.disp, &mv, swept_cells(c, mv));
                }
                parent.push_back(std::move(seen));
                layer = std::move(next);
            }
            if (!arrive) {
                failed = j;
                break;
            }
            auto& mj = moves[static_cast<std::size_t>(j)];
            mj.assign(static_cast<std::size_t>(*arrive), nullptr);
            Cell c = home;
            for (int t = *arrive; t > 0; --t) {
                const auto [prev, mv] = parent[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(ws.id(c))];
                mj[static_cast<std::size_t>(t - 1)] = mv;
                c = ws.cell(prev);
            }
            if (reserved.size() < mj.size()) reserved.resize(mj.size());
            c = from[static_cast<std::size_t>(j)];
            for (std::size_t t = 0; t < mj.size(); ++t) {
                if (mj[t]) {
                    for (Cell f : swept_cells(c, *mj[t])) reserved[t].insert(f);
                    c = c + mj[t]->disp;
                } else {
                    reserved[t].insert(c);
                }
            }
            parked_at[home] = *arrive;
        }
        if (failed < 0) {
            std::size_t len = 0;
            for (const auto& m : moves) len = std::max(len, m.size());
            for (auto& m : moves) m.resize(len, nullptr);
            return moves;
        }
        std::erase(order, failed);
        order.insert(order.begin(), failed);
    }
    return std::nullopt;
}

// Breadth-first search over joint placements; only for small state spaces.
std::optional<Homing> plan_homing_joint(const Scenario& s, const std::vector<Cell>& from,
                                        const std::set<Cell>& parked) {
    const Workspace& ws = s.workspace;
    const int nc = static_cast<int>(from.size());
    const std::int64_t ncell = ws.width() * ws.height();
    std::int64_t states = 1;
    for (int j = 0; j < nc; ++j) {
        states *= ncell;
        if (states > 4'000'000) return std::nullopt;
    }
    auto encode = [&](const std::vector<Cell>& at) {
        std::int64_t k = 0;
        for (Cell c : at) k = k * ncell + ws.id(c);
        return k;
    };
    std::vector<Cell> home(s.potential_starts.begin(), s.potential_starts.begin() + nc);
    // per state: previous state and the choice index of each recharger (0 = wait)
    std::unordered_map<std::int64_t, std::pair<std::int64_t, std::vector<int>>> parent;
    std::vector<std::vector<Cell>> layer{from};
    parent.emplace(encode(from), std::make_pair(-1, std::vector<int>{}));
    const std::int64_t goal = encode(home);
    while (!layer.empty() && !parent.count(goal)) {
        std::vector<std::vector<Cell>> next;
        for (const auto& at : layer) {
            std::vector<int> pick(static_cast<std::size_t>(nc), 0);
            std::vector<Cell> to(static_cast<std::size_t>(nc));
            std::set<Cell> used;
            // Depth-first over each recharger's choice with disjoint footprints.
            std::function<void(int)> expand = [&](int j) {
                if (j == nc) {
                    if (parent.emplace(encode(to), std::make_pair(encode(at), pick)).second) next.push_back(to);
                    return;
                }
                const Cell c = at[static_cast<std::size_t>(j)];
                const auto& prims = s.rechargers[static_cast<std::size_t>(j)].primitives;
                for (int k = 0; k <= static_cast<int>(prims.size()); ++k) {
                    const auto foot = k == 0 ? std::vector<Cell>{c} : swept_cells(c, prims[static_cast<std::size_t>(k - 1)]);
                    bool ok = true;
                    for (Cell f : foot) ok = ok && ws.is_free(f) && !parked.count(f) && !used.count(f);
                    if (!ok) continue;
                    for (Cell f : foot) used.insert(f);
                    pick[static_cast<std::size_t>(j)] = k;
                    to[static_cast<std::size_t>(j)] = k == 0 ? c : c + prims[static_cast<std::size_t>(k - 1)].disp;
                    expand(j + 1);
                    for (Cell f : foot) used.erase(f);
                }
            };
            expand(0);
        }
        layer = std::move(next);
    }
    if (!parent.count(goal)) return std::nullopt;
    std::vector<std::vector<int>> picks;
    for (std::int64_t k = goal; parent.at(k).first >= 0; k = parent.at(k).first) picks.push_back(parent.at(k).second);
    std::reverse(picks.begin(), picks.end());
    Homing moves(static_cast<std::size_t>(nc));
    for (const auto& p : picks)
        for (int j = 0; j < nc; ++j) {
            const int k = p[static_cast<std::size_t>(j)];
            moves[static_cast<std::size_t>(j)].push_back(
                k == 0 ? nullptr : &s.rechargers[static_cast<std::size_t>(j)].primitives[static_cast<std::size_t>(k - 1)]);
        }
    return moves;
}

std::optional<Homing> plan_homing(const Scenario& s, const std::vector<Cell>& from, const std::set<Cell>& parked) {
    if (auto h = plan_homing_prioritized(s, from, parked)) return h;
    return plan_homing_joint(s, from, parked);
}

}  // namespace

GreedyState initial_greedy_state(const Scenario& s) {
    if (s.potential_starts.size() < s.rechargers.size())
        throw DomainError("fewer potential start cells than rechargers");
    GreedyState g;
    for (const auto& w : s.workers) g.workers.push_back({{w.loop.home(), kStationary, w.emax}, 0, false, -1});
    for (std::size_t j = 0; j < s.rechargers.size(); ++j)
        g.rechargers.push_back({s.potential_starts[j], -1, s.potential_starts[j]});
    return g;
}

StopPoint stopping_point(const Scenario& s, const GreedyState& g, int worker) {
    const auto& w = g.workers.at(static_cast<std::size_t>(worker));
    const auto& loop = s.workers[static_cast<std::size_t>(worker)].loop;
    StopPoint sp{w.state.p, 0, false};
    Energy e = w.state.e;
    for (int k : planned_moves(s, g, worker)) {
        const auto& mv = loop.move(k);
        if (e < mv.cost) {
            sp.depleted = true;
            break;
        }
        e -= mv.cost;
        sp.cell = sp.cell + mv.disp;
        ++sp.moves;
    }
    return sp;
}

std::optional<int> lambda(const Scenario& s, const GreedyState& g, int recharger, int worker) {
    const auto sp = stopping_point(s, g, worker);
    const auto targets = service_targets(s.workspace, sp.cell);
    const auto& prims = s.rechargers.at(static_cast<std::size_t>(recharger)).primitives;
    const auto travel = shortest_travel_time(s.workspace, g.rechargers.at(static_cast<std::size_t>(recharger)).cell,
                                             targets, step_shapes(prims));
    if (!travel) return std::nullopt;
    return std::max(sp.moves, *travel);
}

PlanBundle plan_greedy(const Scenario& s, const GreedyOptions& o) {
    validate_scenario(s);
    GreedyState g = initial_greedy_state(s);
    const Workspace& ws = s.workspace;
    const int T = s.horizon;
    const int nw = static_cast<int>(s.workers.size());
    const int nc = static_cast<int>(s.rechargers.size());
    const auto loop_cells = all_loop_cells(s);
    std::vector<Cell> off_loop;
    for (Cell c : ws.free_cells())
        if (!loop_cells.count(c)) off_loop.push_back(c);
    std::vector<std::vector<StepShape>> shapes;
    for (const auto& r : s.rechargers) shapes.push_back(step_shapes(r.primitives));

    for (int i = 0; i < nw; ++i) {
        std::vector<Cell> region;
        for (Cell c : s.workers[static_cast<std::size_t>(i)].loop.cells())
            for (Cell n : ws.neighborhood(c))
                if (n != c) region.push_back(n);
        bool ok = false;
        for (int j = 0; j < nc && !ok; ++j)
            ok = shortest_travel_time(ws, g.rechargers[static_cast<std::size_t>(j)].cell, region,
                                      shapes[static_cast<std::size_t>(j)])
                     .has_value();
        if (!ok) throw PlanningError("worker " + std::to_string(s.workers[static_cast<std::size_t>(i)].id) +
                                     " cannot be reached by any recharger");
    }

    const int cap = T - 1 + o.extension_cap.value_or(8 * (ws.width() + ws.height()) * std::max(1, nw + nc));
    std::vector<std::vector<Primitive>> wacts(static_cast<std::size_t>(nw)), racts(static_cast<std::size_t>(nc));
    std::vector<RechargeEvent> events;
    std::vector<int> yielding(static_cast<std::size_t>(nc), -1);
    std::vector<Cell> homing_failed_at;

    auto choose_target = [&](int j, int i) {
        const Cell stop = stopping_point(s, g, i).cell;
        const Cell from = g.rechargers[static_cast<std::size_t>(j)].cell;
        const auto field = ws.distance_field(std::span<const Cell>(&from, 1), shapes[static_cast<std::size_t>(j)]);
        std::set<Cell> taken;
        for (int q = 0; q < nc; ++q)
            if (q != j && g.rechargers[static_cast<std::size_t>(q)].assigned >= 0)
                taken.insert(g.rechargers[static_cast<std::size_t>(q)].target);
        std::optional<std::tuple<bool, int, int>> best;
        Cell pick = from;
        for (Cell c : service_targets(ws, stop)) {
            const int d = field[static_cast<std::size_t>(ws.id(c))];
            if (d < 0 || taken.count(c)) continue;
            const auto key = std::make_tuple(loop_cells.count(c) > 0, d, ws.id(c));
            if (!best || key < *best) {
                best = key;
                pick = c;
            }
        }
        g.rechargers[static_cast<std::size_t>(j)].target = pick;
    };

    auto workers_parked = [&] {
        for (int i = 0; i < nw; ++i) {
            const auto& w = g.workers[static_cast<std::size_t>(i)];
            const auto& spec = s.workers[static_cast<std::size_t>(i)];
            if (w.cursor != 0 || w.state.p != spec.loop.home() || w.state.e != spec.emax || w.assigned >= 0)
                return false;
        }
        return true;
    };
    auto matched = [&] {
        if (!workers_parked()) return false;
        for (int j = 0; j < nc; ++j)
            if (g.rechargers[static_cast<std::size_t>(j)].cell != s.potential_starts[static_cast<std::size_t>(j)])
                return false;
        return true;
    };

    for (g.step = 0;; ++g.step) {
        const int t = g.step;
        g.extension = t >= T - 1;
        if (g.extension && matched()) break;
        std::vector<Cell> at;
        for (const auto& r : g.rechargers) at.push_back(r.cell);
        if (g.extension && workers_parked() && at != homing_failed_at) {
            std::set<Cell> parked;
            for (const auto& w : g.workers) parked.insert(w.state.p);
            auto homing = plan_homing(s, at, parked);
            if (!homing) homing_failed_at = at;
            if (homing) {
                const std::size_t len = homing->front().size();
                for (std::size_t k = 0; k < len; ++k) {
                    for (auto& a : wacts) a.push_back(Wait{});
                    for (int j = 0; j < nc; ++j) {
                        const auto* mv = (*homing)[static_cast<std::size_t>(j)][k];
                        auto& r = g.rechargers[static_cast<std::size_t>(j)];
                        racts[static_cast<std::size_t>(j)].push_back(mv ? Primitive{*mv} : Primitive{Wait{}});
                        if (mv) r.cell = r.cell + mv->disp;
                    }
                }
                g.step += static_cast<int>(len);
                for (auto& w : g.workers) w.stationary = true;
                break;
            }
        }
        if (t >= cap)
            throw PlanningError("greedy extension did not restore the initial states within " +
                                std::to_string(cap - T + 1) + " steps");

        // Pair available rechargers with charge-deficient workers, smallest lambda first.
        for (;;) {
            std::optional<std::tuple<int, int, int>> best;
            for (int i = 0; i < nw; ++i) {
                const auto& w = g.workers[static_cast<std::size_t>(i)];
                if (w.assigned >= 0 || w.state.e >= s.workers[static_cast<std::size_t>(i)].emax) continue;
                if (!g.extension && !stopping_point(s, g, i).depleted) continue;
                for (int j = 0; j < nc; ++j) {
                    if (g.rechargers[static_cast<std::size_t>(j)].assigned >= 0) continue;
                    const auto l = lambda(s, g, j, i);
                    if (!l) continue;
                    const auto key = std::make_tuple(*l, i, j);
                    if (!best || key < *best) best = key;
                }
            }
            if (!best) break;
            const auto [l, i, j] = *best;
            g.workers[static_cast<std::size_t>(i)].assigned = j;
            g.rechargers[static_cast<std::size_t>(j)].assigned = i;
            choose_target(j, i);
        }
        // A worker that started recharging stays put until it is full.
        std::vector<bool> in_session(static_cast<std::size_t>(nw), false);
        for (int i = 0; i < nw; ++i) {
            const auto& acts = wacts[static_cast<std::size_t>(i)];
            in_session[static_cast<std::size_t>(i)] = g.workers[static_cast<std::size_t>(i)].assigned >= 0 &&
                                                      !acts.empty() && std::holds_alternative<Recharge>(acts.back());
        }
        // Follow workers whose stopping cell moved.
        for (int j = 0; j < nc; ++j) {
            auto& r = g.rechargers[static_cast<std::size_t>(j)];
            if (r.assigned < 0 || in_session[static_cast<std::size_t>(r.assigned)]) continue;
            const Cell stop = stopping_point(s, g, r.assigned).cell;
            if (chebyshev(r.target, stop) != 1) choose_target(j, r.assigned);
        }

        // Worker intents and recharges.
        std::vector<std::optional<int>> want(static_cast<std::size_t>(nw));
        std::vector<bool> charging(static_cast<std::size_t>(nw), false);
        for (int i = 0; i < nw; ++i) {
            const auto& w = g.workers[static_cast<std::size_t>(i)];
            want[static_cast<std::size_t>(i)] = intent(s, g, i);
            if (w.assigned < 0) continue;
            const auto& r = g.rechargers[static_cast<std::size_t>(w.assigned)];
            if (r.cell != r.target || chebyshev(r.cell, w.state.p) > 1) continue;
            const auto& next = want[static_cast<std::size_t>(i)];
            const bool blocked_by_r =
                next && w.state.p + s.workers[static_cast<std::size_t>(i)].loop.move(*next).disp == r.cell;
            if (in_session[static_cast<std::size_t>(i)] || !next || blocked_by_r ||
                stopping_point(s, g, i).cell == w.state.p) {
                charging[static_cast<std::size_t>(i)] = true;
                want[static_cast<std::size_t>(i)].reset();
            }
        }

        std::set<Cell> occupied;  // cells rechargers must avoid this step
        for (int i = 0; i < nw; ++i) {
            const auto& w = g.workers[static_cast<std::size_t>(i)];
            occupied.insert(w.state.p);
            if (const auto& k = want[static_cast<std::size_t>(i)])
                for (Cell c : swept_cells(w.state.p, s.workers[static_cast<std::size_t>(i)].loop.move(*k)))
                    occupied.insert(c);
        }
        for (const auto& r : g.rechargers) occupied.insert(r.cell);

        // Recharger goals: the serving target, home during the extension, or off the loops.
        std::vector<std::vector<Cell>> goals(static_cast<std::size_t>(nc));
        for (int j = 0; j < nc; ++j) {
            const auto& r = g.rechargers[static_cast<std::size_t>(j)];
            const bool serving = r.assigned >= 0 && charging[static_cast<std::size_t>(r.assigned)];
            if (r.assigned >= 0 && !serving && r.cell != r.target)
                goals[static_cast<std::size_t>(j)] = {r.target};
            else if (r.assigned < 0 && g.extension && r.cell != s.potential_starts[static_cast<std::size_t>(j)])
                goals[static_cast<std::size_t>(j)] = {s.potential_starts[static_cast<std::size_t>(j)]};
            else if (r.assigned < 0 && loop_cells.count(r.cell))
                goals[static_cast<std::size_t>(j)] = off_loop;
        }
        // Routes ignoring other rechargers.
        std::set<Cell> workers_now;
        for (const auto& w : g.workers) workers_now.insert(w.state.p);
        // Paths keep clear of other rechargers' start cells when they can.
        auto path_for = [&](int j, const std::vector<Cell>& to, const std::function<bool(Cell)>& blocked) {
            const Cell from = g.rechargers[static_cast<std::size_t>(j)].cell;
            auto p = shortest_path(ws, from, to, shapes[static_cast<std::size_t>(j)], [&](Cell c) {
                for (int k = 0; k < nc; ++k)
                    if (k != j && c == s.potential_starts[static_cast<std::size_t>(k)]) return true;
                return blocked(c);
            });
            return p.empty() ? shortest_path(ws, from, to, shapes[static_cast<std::size_t>(j)], blocked) : p;
        };
        std::vector<std::vector<Cell>> route(static_cast<std::size_t>(nc));
        for (int j = 0; j < nc; ++j)
            if (!goals[static_cast<std::size_t>(j)].empty())
                route[static_cast<std::size_t>(j)] =
                    path_for(j, goals[static_cast<std::size_t>(j)], [&](Cell c) { return workers_now.count(c) > 0; });
        auto on_route = [&](int j, Cell c) {
            const auto& rt = route[static_cast<std::size_t>(j)];
            return rt.size() > 1 && std::find(rt.begin() + 1, rt.end(), c) != rt.end();
        };
        for (int q = 0; q < nc; ++q) {
            const auto& r = g.rechargers[static_cast<std::size_t>(q)];
            if (r.assigned >= 0) continue;
            auto& gq = goals[static_cast<std::size_t>(q)];
            // Hold back when the goal is on the route of someone serving, of a
            // lower id, or of someone whose own goal this route does not block.
            // Keep yielding to the same recharger until its route clears.
            int yield = -1;
            if (gq.size() == 1)
                for (int j = 0; j < nc && yield < 0; ++j) {
                    const auto& rj = g.rechargers[static_cast<std::size_t>(j)];
                    const auto& rt = route[static_cast<std::size_t>(j)];
                    if (j == q || !on_route(j, gq.front()) || rj.cell == gq.front()) continue;
                    if (yielding[static_cast<std::size_t>(q)] == j || rj.assigned >= 0 || j < q ||
                        !on_route(q, rt.back()))
                        yield = j;
                }
            yielding[static_cast<std::size_t>(q)] = yield;
            if (yield >= 0) {
                gq.clear();
                route[static_cast<std::size_t>(q)].clear();
            }
            // Idle and on someone's route: step aside.
            if (gq.empty()) {
                std::set<Cell> avoid;
                for (int j = 0; j < nc; ++j)
                    if (j != q && on_route(j, r.cell)) avoid.insert(route[static_cast<std::size_t>(j)].begin(), route[static_cast<std::size_t>(j)].end());
                if (!avoid.empty())
                    for (Cell c : off_loop)
                        if (!avoid.count(c)) gq.push_back(c);
            }
        }

        // Rechargers plan in id order.
        std::vector<Cell> rnext(static_cast<std::size_t>(nc));
        std::set<Cell> rcells;
        for (int j = 0; j < nc; ++j) {
            auto& r = g.rechargers[static_cast<std::size_t>(j)];
            rnext[static_cast<std::size_t>(j)] = r.cell;
            Primitive act = Wait{};
            const auto& gj = goals[static_cast<std::size_t>(j)];
            if (!gj.empty()) {
                const Cell self = r.cell;
                auto blocked = [&](Cell c) { return c != self && occupied.count(c) > 0; };
                const auto path = path_for(j, gj, blocked);
                if (path.size() >= 2) {
                    const auto* mv = primitive_for(s.rechargers[static_cast<std::size_t>(j)].primitives, path[1] - path[0]);
                    if (!mv) throw PlanningError("recharger path step has no matching primitive");
                    for (Cell c : swept_cells(r.cell, *mv)) occupied.insert(c);
                    rnext[static_cast<std::size_t>(j)] = path[1];
                    act = *mv;
                }
            }
            for (Cell c : {r.cell, rnext[static_cast<std::size_t>(j)]}) rcells.insert(c);
            racts[static_cast<std::size_t>(j)].push_back(act);
        }

        // Workers yield to rechargers in their way, then everyone applies.
        for (int i = 0; i < nw; ++i) {
            auto& w = g.workers[static_cast<std::size_t>(i)];
            const auto& spec = s.workers[static_cast<std::size_t>(i)];
            auto& k = want[static_cast<std::size_t>(i)];
            if (k)
                for (Cell c : swept_cells(w.state.p, spec.loop.move(*k)))
                    if (c != w.state.p && rcells.count(c)) k.reset();
            Primitive act = Wait{};
            if (charging[static_cast<std::size_t>(i)]) {
                const Energy d = std::min(s.delta_max, spec.emax - w.state.e);
                act = Recharge{d};
                events.push_back({t, i, w.assigned, d, w.state.p, g.rechargers[static_cast<std::size_t>(w.assigned)].cell});
            } else if (k) {
                act = spec.loop.move(*k);
                w.cursor = (w.cursor + 1) % spec.loop.size();
            }
            w.state = apply(w.state, act, spec.emax, s.delta_max);
            w.stationary = !k.has_value();
            if (charging[static_cast<std::size_t>(i)] && w.state.e == spec.emax) {
                g.rechargers[static_cast<std::size_t>(w.assigned)].assigned = -1;
                w.assigned = -1;
            }
            wacts[static_cast<std::size_t>(i)].push_back(std::move(act));
        }
        for (int j = 0; j < nc; ++j) g.rechargers[static_cast<std::size_t>(j)].cell = rnext[static_cast<std::size_t>(j)];
    }

    std::vector<Cell> starts(s.potential_starts.begin(), s.potential_starts.begin() + nc);
    return assemble_bundle(s, "greedy", g.step + 1, std::move(wacts), std::move(racts), std::move(starts),
                           std::move(events));
}

}  // namespace mrp
