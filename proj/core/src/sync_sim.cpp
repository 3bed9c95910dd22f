#include <algorithm>
#include <limits>
#include <map>
#include <random>

#include "mrp/error.hpp"
#include "mrp/executor.hpp"

namespace mrp {

double DelayModel::delay(int robot, int cycle, int step) const {
    double d = 0.0;
    if (robot >= 0 && static_cast<std::size_t>(robot) < offsets.size()) {
        const auto& row = offsets[static_cast<std::size_t>(robot)];
        if (step >= 0 && static_cast<std::size_t>(step) < row.size()) d += row[static_cast<std::size_t>(step)];
    }
    if (jitter_max > 0.0) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(robot), static_cast<std::uint32_t>(cycle),
                          static_cast<std::uint32_t>(step)};
        std::mt19937_64 rng(seq);
        d += static_cast<double>(rng() >> 11) * 0x1.0p-53 * jitter_max;
    }
    if (d < 0.0) throw DomainError("delays must be non-negative");
    return d;
}

namespace {

// Rechargers carry no battery; their energy is pinned at zero.
RobotState advance(RobotState st, const Primitive& a, bool battery) {
    if (const auto* m = std::get_if<MotionPrimitive>(&a)) {
        st.p = st.p + m->disp;
        st.e -= m->cost;
        st.v = m->v_to;
    } else if (const auto* r = std::get_if<Recharge>(&a)) {
        st.e += r->delta;
    }
    if (!battery) st.e = 0;
    return st;
}

}  // namespace

SyncReport simulate_with_delays(const PlanBundle& b, const Scenario& s, const DelayModel& dm, int cycles) {
    if (cycles < 1) throw DomainError("simulation needs at least one cycle");
    const int nw = static_cast<int>(s.workers.size());
    const int nc = static_cast<int>(s.rechargers.size());
    if (static_cast<int>(b.workers.size()) != nw || static_cast<int>(b.rechargers.size()) != nc ||
        static_cast<int>(b.recharger_starts.size()) != nc)
        throw DomainError("bundle robot counts do not match the scenario");
    const int R = nw + nc;
    const int n = b.T_prime - 1;

    std::vector<const std::vector<Primitive>*> acts;
    std::vector<RobotState> init;
    std::vector<std::string> names;
    for (int i = 0; i < nw; ++i) {
        acts.push_back(&b.workers[static_cast<std::size_t>(i)].actions);
        init.push_back({s.workers[static_cast<std::size_t>(i)].loop.home(), kStationary, s.workers[static_cast<std::size_t>(i)].emax});
        names.push_back("worker " + std::to_string(s.workers[static_cast<std::size_t>(i)].id));
    }
    for (int j = 0; j < nc; ++j) {
        acts.push_back(&b.rechargers[static_cast<std::size_t>(j)].actions);
        init.push_back({b.recharger_starts[static_cast<std::size_t>(j)], kStationary, 0});
        names.push_back("recharger " + std::to_string(s.rechargers[static_cast<std::size_t>(j)].id));
    }
    for (int r = 0; r < R; ++r)
        if (static_cast<int>(acts[static_cast<std::size_t>(r)]->size()) != n)
            throw DomainError("plan length differs from T' - 1");

    // Joint recharge steps: partner[r][t] is the other robot, or -1.
    std::vector<std::vector<int>> partner(static_cast<std::size_t>(R), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (const auto& e : b.events) {
        if (e.step < 0 || e.step >= n || e.worker < 0 || e.worker >= nw || e.recharger < 0 || e.recharger >= nc) continue;
        if (!std::holds_alternative<Recharge>((*acts[static_cast<std::size_t>(e.worker)])[static_cast<std::size_t>(e.step)])) continue;
        partner[static_cast<std::size_t>(e.worker)][static_cast<std::size_t>(e.step)] = nw + e.recharger;
        partner[static_cast<std::size_t>(nw + e.recharger)][static_cast<std::size_t>(e.step)] = e.worker;
    }

    // Nominal state sequence of one cycle.
    std::vector<std::vector<RobotState>> nominal(static_cast<std::size_t>(R));
    for (int r = 0; r < R; ++r) {
        nominal[static_cast<std::size_t>(r)].push_back(init[static_cast<std::size_t>(r)]);
        for (const auto& a : *acts[static_cast<std::size_t>(r)])
            nominal[static_cast<std::size_t>(r)].push_back(advance(nominal[static_cast<std::size_t>(r)].back(), a, r < nw));
    }

    SyncReport rep;
    rep.sync_messages_per_cycle = nc;
    std::vector<double> start(static_cast<std::size_t>(R), 0.0);
    std::vector<RobotState> state = init;
    for (int c = 0; c < cycles; ++c) {
        std::vector<double> time = start;
        std::vector<int> ptr(static_cast<std::size_t>(R), 0);
        for (int r = 0; r < R; ++r)
            if (state[static_cast<std::size_t>(r)] != nominal[static_cast<std::size_t>(r)][0]) rep.states_match = false;
        for (;;) {
            int pick = -1;
            bool pending = false;
            for (int r = 0; r < R; ++r) {
                const int k = ptr[static_cast<std::size_t>(r)];
                if (k >= n) continue;
                pending = true;
                const int p = partner[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
                const bool enabled = p < 0 || (ptr[static_cast<std::size_t>(p)] == k &&
                                               partner[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] == r);
                if (enabled && (pick < 0 || time[static_cast<std::size_t>(r)] < time[static_cast<std::size_t>(pick)])) pick = r;
            }
            if (!pending) break;
            if (pick < 0) {
                rep.deadlock = true;
                for (int r = 0; r < R; ++r) {
                    const int k = ptr[static_cast<std::size_t>(r)];
                    if (k >= n) continue;
                    const int p = partner[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)];
                    if (p >= 0) rep.blocked.push_back({names[static_cast<std::size_t>(r)], names[static_cast<std::size_t>(p)]});
                }
                return rep;
            }
            const int k = ptr[static_cast<std::size_t>(pick)];
            const int p = partner[static_cast<std::size_t>(pick)][static_cast<std::size_t>(k)];
            std::vector<int> movers{pick};
            if (p >= 0) movers.push_back(p);
            double begin = 0.0, dur = 0.0;
            for (int r : movers) {
                begin = std::max(begin, time[static_cast<std::size_t>(r)]);
                dur = std::max(dur, 1.0 + dm.delay(r, c, k));
            }
            for (int r : movers) {
                auto& st = state[static_cast<std::size_t>(r)];
                st = advance(st, (*acts[static_cast<std::size_t>(r)])[static_cast<std::size_t>(k)], r < nw);
                time[static_cast<std::size_t>(r)] = begin + dur;
                ++ptr[static_cast<std::size_t>(r)];
                if (st != nominal[static_cast<std::size_t>(r)][static_cast<std::size_t>(k + 1)]) rep.states_match = false;
            }
        }
        // Each recharger broadcasts sync once home; everyone waits for all |C| of them.
        double sync = 0.0;
        for (int j = 0; j < nc; ++j) sync = std::max(sync, time[static_cast<std::size_t>(nw + j)]);
        const double begin = *std::min_element(start.begin(), start.end());
        double end = 0.0;
        for (int r = 0; r < R; ++r) end = std::max(end, time[static_cast<std::size_t>(r)]);
        rep.makespan.push_back(end - begin);
        rep.inflation.push_back(end - begin - n);
        for (int r = 0; r < R; ++r) start[static_cast<std::size_t>(r)] = std::max(time[static_cast<std::size_t>(r)], sync);
    }
    rep.completed = true;
    return rep;
}

}  // namespace mrp
