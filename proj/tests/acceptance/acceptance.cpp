// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
// `mrp_acceptance --only 1,7` runs a subset.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "generators.hpp"
#include "mrp/error.hpp"
#include "mrp/executor.hpp"
#include "mrp/experiments.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/greedy.hpp"
#include "mrp/kinematics.hpp"
#include "mrp/oneshot.hpp"
#include "mrp/twoshot.hpp"
#include "oracle.hpp"

using namespace mrp;

namespace {

// Pinned budgets and sizes.
constexpr int kOracleInstances = 6;
constexpr int kSoundnessBundles = 20;
constexpr std::uint64_t kSoundnessSeedCap = 60;
constexpr double kSmallPhaseOneSeconds = 60.0;
constexpr double kSmallProbeSeconds = 120.0;
constexpr double kMinimalityProbeSeconds = 300.0;
constexpr int kCertifiedInstances = 3;
constexpr std::uint64_t kCertifiedSeedCap = 80;
constexpr double kWarehousePhaseOneSeconds = 1800.0;
constexpr double kTrendSeconds = 300.0;
constexpr int kPropertyCases = 1000;
constexpr int kSyncCycles = 10;
constexpr double kSyncJitter = 3.0;
constexpr std::uint64_t kSyncSeed = 42;
constexpr double kEfficiencyTolerance = 1e-9;  // percent points, for exact-ratio checks

struct Verdict {
    bool pass = false;
    std::string detail;
};

double since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TwoShotOptions small_twoshot() {
    TwoShotOptions o;
    o.phase_one_seconds = kSmallPhaseOneSeconds;
    o.probe_seconds = kSmallProbeSeconds;
    o.travel_seconds = 30.0;
    return o;
}

bool three_matchings(const PlanBundle& b, const Scenario& s) {
    const auto v = validate(b, s);
    for (const auto& x : v.violations)
        if (x.clause.find("matching") != std::string::npos) return false;
    for (std::size_t i = 0; i < b.workers.size(); ++i) {
        const auto& tr = b.workers[i].trajectory;
        if (!(tr.front().p == tr.back().p) || tr.back().e != s.workers[i].emax) return false;
    }
    for (const auto& r : b.rechargers)
        if (!(r.trajectory.front().p == r.trajectory.back().p)) return false;
    return v.ok();
}

// 1: exhaustive search and one-shot agree on the minimum W.
Verdict oracle_optimality() {
    int agreed = 0, feasible = 0, tried = 0;
    std::ostringstream why;
    for (std::uint64_t seed = 1; feasible < kOracleInstances && seed <= 40; ++seed) {
        const auto s = tiny_random_scenario(seed);
        const auto want = oracle::minimum_wait(s);
        const auto got = plan_oneshot(s);
        ++tried;
        if (!want.min_wait) {
            if (got.status != smt::Status::Unsatisfiable) why << " seed " << seed << ": oracle infeasible, solver " << smt::to_string(got.status) << ";";
            continue;
        }
        ++feasible;
        if (got.status == smt::Status::Optimal && got.objective_values.front() == *want.min_wait) {
            ++agreed;
        } else {
            why << " seed " << seed << ": oracle W=" << *want.min_wait << ", solver "
                << smt::to_string(got.status) << " W=" << (got.objective_values.empty() ? -1 : got.objective_values.front()) << ";";
        }
    }
    std::ostringstream d;
    d << agreed << "/" << feasible << " feasible tiny instances match (" << tried << " tried)" << why.str();
    return {agreed == feasible && feasible >= kOracleInstances && why.str().empty(), d.str()};
}

struct SoundnessRun {
    Scenario s;
    TwoShotResult r;
};
std::vector<SoundnessRun> g_soundness;  // shared with criterion 3

// 2: two-shot bundles on small random layouts validate and repeat.
Verdict twoshot_soundness() {
    g_soundness.clear();
    int good = 0, skipped = 0;
    std::ostringstream why;
    for (std::uint64_t seed = 1; static_cast<int>(g_soundness.size()) < kSoundnessBundles && seed <= kSoundnessSeedCap; ++seed) {
        const auto s = small_random_scenario(seed);
        TwoShotResult r;
        try {
            r = plan_twoshot(s, small_twoshot());
        } catch (const PlanningError&) {
            ++skipped;  // no plan at this horizon; not a bundle to check
            continue;
        }
        const bool ok = three_matchings(r.phase2.bundle, s) && replay_hypercycles(r.phase2.bundle, s, 3).ok;
        if (ok) ++good;
        else why << " seed " << seed << " failed;";
        g_soundness.push_back({s, std::move(r)});
    }
    std::ostringstream d;
    d << good << "/" << g_soundness.size() << " bundles valid with 3 matchings and replay(3) ok, " << skipped
      << " infeasible layouts skipped" << why.str();
    return {good == static_cast<int>(g_soundness.size()) && good >= kSoundnessBundles, d.str()};
}

// 3: one step shorter is infeasible for every criterion-2 solve.
Verdict t_prime_minimality() {
    if (g_soundness.empty()) twoshot_soundness();
    auto cfg = smt::default_solver_config();
    cfg.timeout_seconds = kMinimalityProbeSeconds;
    int unsat = 0;
    std::ostringstream why;
    for (const auto& run : g_soundness) {
        const int Tp = run.r.phase2.bundle.T_prime;
        const auto st = check_phase_two(run.s, run.r.phase1, Tp - 1, cfg);
        if (st == smt::Status::Unsatisfiable) ++unsat;
        else why << " " << run.s.name << " T'=" << Tp << ": " << smt::to_string(st) << ";";
    }
    std::ostringstream d;
    d << unsat << "/" << g_soundness.size() << " re-solves at T'-1 unsatisfiable" << why.str();
    return {unsat == static_cast<int>(g_soundness.size()) && !g_soundness.empty(), d.str()};
}

// 4: when the certificate holds, loop counts match one-shot at T'.
Verdict certificate() {
    int certified = 0, equal = 0;
    std::ostringstream why;
    for (std::uint64_t seed = 1; certified < kCertifiedInstances && seed <= kCertifiedSeedCap; ++seed) {
        const auto s = tiny_random_scenario(seed);
        TwoShotResult r;
        try {
            r = plan_twoshot(s, small_twoshot());
        } catch (const PlanningError&) {
            continue;
        }
        if (!r.certificate.certified || !r.phase2.minimality_proven) continue;
        ++certified;
        OneShotOptions o;
        o.horizon = r.phase2.bundle.T_prime;
        const auto one = plan_oneshot(s, o);
        if (!one.bundle) {
            why << " seed " << seed << ": one-shot " << smt::to_string(one.status) << ";";
            continue;
        }
        const auto a = efficiency(r.phase2.bundle, s), b = efficiency(*one.bundle, s);
        bool same = true;
        for (std::size_t i = 0; i < a.workers.size(); ++i) same = same && a.workers[i].loops == b.workers[i].loops;
        if (same) ++equal;
        else why << " seed " << seed << ": loop counts differ;";
    }
    std::ostringstream d;
    d << equal << "/" << certified << " certified tiny instances have equal loop counts" << why.str();
    return {certified >= kCertifiedInstances && equal == certified, d.str()};
}

// 5: two-shot beats greedy on the warehouse fixture.
Verdict greedy_dominance() {
    const auto s = warehouse_fixture();
    const auto g = efficiency(plan_greedy(s), s);
    TwoShotOptions o;
    o.phase_one_seconds = kWarehousePhaseOneSeconds;
    const auto t0 = std::chrono::steady_clock::now();
    TwoShotResult r;
    try {
        r = plan_twoshot(s, o);
    } catch (const PlanningError& e) {
        return {false, std::string("two-shot failed: ") + e.what()};
    }
    const auto t = efficiency(r.phase2.bundle, s);
    char buf[256];
    std::snprintf(buf, sizeof buf, "two-shot E=%.2f%% (T'=%d, phase 1 %s, %.0fs) vs greedy E=%.2f%% (T'=%d)", t.E,
                  t.T_prime, smt::to_string(r.phase1.status).c_str(), since(t0), g.E, g.T_prime);
    return {validate(r.phase2.bundle, s).ok() && t.E > g.E, buf};
}

// 6: E trends over T and |P| on the two-worker warehouse family.
Verdict trends() {
    const auto base = warehouse_fixture(2, 1, 30, 16);
    auto sweep = [&](SweepKind kind, std::vector<int> values) {
        SweepOptions o;
        o.kind = kind;
        o.values = std::move(values);
        o.algorithms = {Algorithm::TwoShot};
        o.request.timeout_seconds = kTrendSeconds;
        return run_sweep(base, o);
    };
    std::ostringstream d;
    bool pass = true;
    auto check = [&](const char* name, const std::vector<SweepRow>& rows) {
        d << name << ":";
        for (std::size_t k = 0; k < rows.size(); ++k) {
            d << " " << rows[k].value << "->";
            if (rows[k].status != "ok") {
                d << rows[k].status;
                pass = false;
                continue;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", rows[k].E);
            d << buf;
            if (k > 0 && rows[k].E < rows[k - 1].E) pass = false;
        }
        d << "; ";
    };
    check("E by T", sweep(SweepKind::Horizon, {20, 25, 30}));
    check("E by |P|", sweep(SweepKind::Starts, {1, 2, 4, 8, 16}));
    return {pass, d.str()};
}

// 7: formulas against exact arithmetic and BFS.
Verdict properties() {
    std::mt19937_64 rng(7);
    int eff = 0, steps = 0, lam = 0, bad = 0;
    for (int k = 0; k < kPropertyCases; ++k, ++eff) {
        const int nw = oracle::draw(rng, 1, 12), T = oracle::draw(rng, 1, 400);
        const std::int64_t slots = static_cast<std::int64_t>(nw) * T;
        const auto W = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(slots + 1));
        const double want = 100.0 * static_cast<double>(slots - W) / static_cast<double>(slots);
        if (std::abs(efficiency_percent(nw, T, W) - want) > kEfficiencyTolerance) ++bad;
    }
    for (int k = 0; k < kPropertyCases; ++k, ++steps) {
        const Energy emax = oracle::draw(rng, 1, 500), dmax = oracle::draw(rng, 1, 60);
        const auto e = static_cast<Energy>(rng() % static_cast<std::uint64_t>(emax + 1));
        int n = 0;
        for (Energy x = e; x < emax; x += dmax) ++n;
        if (recharge_steps_needed(e, emax, dmax) != n) ++bad;
    }
    for (int k = 0; k < kPropertyCases; ++k, ++lam) {
        const auto s = oracle::random_loop_scenario(rng);
        auto g = initial_greedy_state(s);
        const auto& L = s.workers[0].loop;
        const int m = L.size();
        g.step = oracle::draw(rng, 0, s.horizon - 1);
        const int cur = oracle::draw(rng, 0, m - 1);
        const Energy e = oracle::draw(rng, 0, static_cast<int>(s.workers[0].emax));
        g.workers[0].cursor = cur;
        g.workers[0].state = {L.point(cur), kStationary, e};
        const int moves = static_cast<int>(std::min<Energy>(oracle::planned_moves(cur, m, s.horizon - 1 - g.step), e));
        const int travel = oracle::bfs_distance(s.workspace, g.rechargers[0].cell,
                                                oracle::ring(s.workspace, L.point((cur + moves) % m)));
        const auto got = lambda(s, g, 0, 0);
        if (travel < 0 ? got.has_value() : got.value_or(-1) != std::max(moves, travel)) ++bad;
    }
    std::ostringstream d;
    d << eff << " efficiency, " << steps << " refill-step and " << lam << " lambda cases, " << bad << " mismatches";
    return {bad == 0, d.str()};
}

// 8: seeded jitter never deadlocks and keeps the nominal states.
Verdict sync_protocol() {
    int ok = 0, n = 0;
    std::ostringstream why;
    for (const auto& name : fixture_names()) {
        const auto s = fixture_by_name(name);
        const auto b = plan_greedy(s);
        if (!validate(b, s).ok()) {
            why << " " << name << " bundle invalid;";
            continue;
        }
        ++n;
        DelayModel dm;
        dm.jitter_max = kSyncJitter;
        dm.seed = kSyncSeed;
        const auto r = simulate_with_delays(b, s, dm, kSyncCycles);
        if (r.completed && !r.deadlock && r.states_match) ++ok;
        else why << " " << name << " diverged;";
    }
    std::ostringstream d;
    d << ok << "/" << n << " bundles completed " << kSyncCycles << " jittered cycles" << why.str();
    return {n >= 5 && ok == n, d.str()};
}

// 9: byte-identical output from repeated runs.
Verdict determinism() {
    int same = 0, n = 0;
    for (const auto& name : fixture_names()) {
        const auto s = fixture_by_name(name);
        n += 2;
        same += bundle_to_json(plan_greedy(s)) == bundle_to_json(plan_greedy(s));
        same += smt::emit_smtlib(encode_oneshot(s)) == smt::emit_smtlib(encode_oneshot(s));
    }
    std::ostringstream d;
    d << same << "/" << n << " greedy bundles and SMT-LIB texts identical across runs";
    return {same == n, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "criteria to run")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"oracle optimality", oracle_optimality},
        {"two-shot soundness", twoshot_soundness},
        {"T' minimality", t_prime_minimality},
        {"certificate implies one-shot loop counts", certificate},
        {"two-shot beats greedy on warehouse", greedy_dominance},
        {"efficiency trends in T and |P|", trends},
        {"formula properties", properties},
        {"sync under jitter", sync_protocol},
        {"determinism", determinism},
    };
    const std::set<int> pick(only.begin(), only.end());
    bool all = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k) + 1;
        if (!pick.empty() && !pick.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[k].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        all = all && v.pass;
        std::printf("criterion %d %s: %s (%.1fs) %s\n", id, criteria[k].first, v.pass ? "PASS" : "FAIL", since(t0),
                    v.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
