// mrp: plan, check and study recharging schedules for looping workers.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrp/error.hpp"
#include "mrp/executor.hpp"
#include "mrp/experiments.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/render.hpp"
#include "mrp/scenario.hpp"
#include "mrp/twoshot.hpp"

namespace fs = std::filesystem;
using namespace mrp;

namespace {

enum Exit { kOk = 0, kInfeasible = 1, kTimeout = 2, kInvalid = 3 };

struct Common {
    std::string scenario;
    std::string solver_cmd;
    double timeout = 10800.0;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    std::string dump_smt;
    int jobs = 1;
};

// "fixture:<name>" loads a built-in fixture; anything else is a file path.
Scenario load(const std::string& spec, std::uint64_t seed) {
    if (spec.empty()) throw ParseError("--scenario is required");
    if (spec.rfind("fixture:", 0) == 0) return fixture_by_name(spec.substr(8), seed == 0 ? 1 : seed);
    return load_scenario(spec);
}

smt::SolverConfig solver_config(const Common& c) {
    auto cfg = smt::default_solver_config();
    if (!c.solver_cmd.empty()) {
        std::istringstream in(c.solver_cmd);
        cfg.command.clear();
        for (std::string w; in >> w;) cfg.command.push_back(w);
    }
    cfg.timeout_seconds = c.timeout;
    if (c.seed != 0) cfg.seed = c.seed;
    cfg.dump_path = c.dump_smt;
    return cfg;
}

void print_efficiency(const EfficiencyReport& e) {
    std::printf("T=%d T'=%d W=%lld U=%lld E=%.2f%% (work %.2f%%, recharge %.2f%%; at T: %.2f%%)\n", e.T, e.T_prime,
                static_cast<long long>(e.W), static_cast<long long>(e.U), e.E, e.work_percent, e.recharge_percent,
                e.E_at_T);
    for (std::size_t i = 0; i < e.workers.size(); ++i)
        std::printf("  worker %zu: work %d, recharge %d, wait %d, loops %d\n", i, e.workers[i].work,
                    e.workers[i].recharge, e.workers[i].wait, e.workers[i].loops);
}

void add_common(CLI::App* app, Common& c, bool solver) {
    app->add_option("--scenario", c.scenario, "scenario JSON, or fixture:<name>")->required();
    app->add_option("--seed", c.seed, "seed for solvers and generated fixtures");
    app->add_option("--out-dir", c.out_dir, "output directory");
    if (solver) {
        app->add_option("--solver-cmd", c.solver_cmd, "solver command line (default: $MRP_SOLVER or 'z3 -in')");
        app->add_option("--timeout-secs", c.timeout, "per-solve time budget in seconds")->check(CLI::PositiveNumber);
        app->add_option("--dump-smt", c.dump_smt, "write the emitted SMT-LIB text to this file");
        app->add_option("--jobs", c.jobs, "parallel sweep cells")->check(CLI::PositiveNumber);
    }
}

int cmd_plan(const Common& c, const std::string& algo) {
    Scenario s = load(c.scenario, c.seed);
    for (const auto& w : scenario_warnings(s)) std::fprintf(stderr, "warning: %s\n", w.c_str());
    PlanRequest req;
    req.algorithm = algorithm_from_string(algo);
    req.solver = solver_config(c);
    req.timeout_seconds = c.timeout;
    const auto out = run_planner(s, req);
    if (!out.bundle) {
        std::fprintf(stderr, "%s: %s\n", algo.c_str(), out.message.c_str());
        return out.status == PlanStatus::Timeout ? kTimeout : kInfeasible;
    }
    const fs::path dir(c.out_dir);
    save_bundle(*out.bundle, dir / "bundle.json");
    const auto e = efficiency(*out.bundle, s);
    write_text_file(dir / "efficiency.json", efficiency_to_json(e));
    std::printf("%s: %s in %.2fs\n", algo.c_str(), out.message.empty() ? "ok" : out.message.c_str(), out.seconds);
    print_efficiency(e);
    const auto v = validate(*out.bundle, s);
    if (!v.ok()) {
        write_text_file(dir / "violations.json", validation_to_json(v));
        std::fprintf(stderr, "plan failed validation (%zu violations)\n", v.violations.size());
        return kInfeasible;
    }
    return kOk;
}

int cmd_validate(const Common& c, const std::string& bundle_path) {
    Scenario s = load(c.scenario, c.seed);
    const auto b = load_bundle(bundle_path);
    const auto v = validate(b, s);
    std::cout << validation_to_json(v);
    if (v.ok()) print_efficiency(efficiency(b, s));
    return v.ok() ? kOk : kInfeasible;
}

int cmd_render(const Common& c, const std::string& bundle_path, const std::string& out) {
    Scenario s = load(c.scenario, c.seed);
    std::optional<PlanBundle> b;
    if (!bundle_path.empty()) b = load_bundle(bundle_path);
    const fs::path target = out.empty() ? fs::path(c.out_dir) / "render.svg" : fs::path(out);
    write_text_file(target, render_svg(s, b ? &*b : nullptr));
    std::printf("wrote %s\n", target.string().c_str());
    return kOk;
}

int cmd_sweep(const Common& c, const std::string& kind, const std::vector<std::string>& values,
              const std::vector<std::string>& algos) {
    Scenario s = load(c.scenario, c.seed);
    SweepOptions o;
    o.kind = sweep_kind_from_string(kind);
    for (const auto& v : values) o.values.push_back(v == "all" ? 0 : std::stoi(v));
    if (!algos.empty()) {
        o.algorithms.clear();
        for (const auto& a : algos) o.algorithms.push_back(algorithm_from_string(a));
    } else if (o.kind == SweepKind::AlgoCompare) {
        o.algorithms = {Algorithm::Greedy, Algorithm::TwoShot};
    }
    o.request.solver = solver_config(c);
    o.request.timeout_seconds = c.timeout;
    o.jobs = c.jobs;
    o.seed = c.seed;
    const auto rows = run_sweep(s, o);
    const fs::path dir(c.out_dir);
    write_text_file(dir / ("sweep_" + kind + ".csv"), sweep_csv(s, o, rows));
    write_text_file(dir / ("sweep_" + kind + ".svg"), sweep_svg(rows, s.name + ": efficiency by " + kind));
    std::cout << sweep_csv(s, o, rows);
    bool any_timeout = false, any_infeasible = false;
    for (const auto& r : rows) {
        any_timeout = any_timeout || r.status == "timeout";
        any_infeasible = any_infeasible || r.status == "infeasible";
    }
    return any_timeout ? kTimeout : any_infeasible ? kInfeasible : kOk;
}

int cmd_fixture(const std::string& name, std::uint64_t seed, const std::string& out) {
    Scenario s = fixture_by_name(name, seed == 0 ? 1 : seed);
    if (out.empty()) std::cout << scenario_to_json(s);
    else save_scenario(s, out);
    return kOk;
}

int cmd_replay(const Common& c, const std::string& bundle_path, int cycles) {
    Scenario s = load(c.scenario, c.seed);
    const auto r = replay_hypercycles(load_bundle(bundle_path), s, cycles);
    std::cout << replay_to_json(r);
    return r.ok ? kOk : kInfeasible;
}

int cmd_simulate(const Common& c, const std::string& bundle_path, int cycles, double jitter) {
    Scenario s = load(c.scenario, c.seed);
    DelayModel dm;
    dm.jitter_max = jitter;
    dm.seed = c.seed;
    const auto r = simulate_with_delays(load_bundle(bundle_path), s, dm, cycles);
    std::cout << sync_to_json(r);
    return r.completed && r.states_match ? kOk : kInfeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Recharging schedules for robots that repeat working loops"};
    app.require_subcommand(1);
    Common c;

    std::string algo = "twoshot";
    auto* plan = app.add_subcommand("plan", "plan a hypercycle and write bundle.json");
    add_common(plan, c, true);
    plan->add_option("--algo", algo, "oneshot, twoshot or greedy")
        ->check(CLI::IsMember({"oneshot", "twoshot", "greedy"}));

    std::string bundle, out;
    auto* val = app.add_subcommand("validate", "check a bundle against its scenario");
    add_common(val, c, false);
    val->add_option("--bundle", bundle, "bundle JSON")->required();

    auto* ren = app.add_subcommand("render", "draw the scenario, and a bundle if given, as SVG");
    add_common(ren, c, false);
    ren->add_option("--bundle", bundle, "bundle JSON");
    ren->add_option("--out", out, "SVG path (default <out-dir>/render.svg)");

    std::string kind = "T";
    std::vector<std::string> values, algos;
    auto* sw = app.add_subcommand("sweep", "run a parameter sweep and write CSV and SVG");
    add_common(sw, c, true);
    sw->add_option("--kind", kind, "T, P, delta_max or algo-compare")
        ->check(CLI::IsMember({"T", "P", "delta_max", "algo-compare"}));
    sw->add_option("--values", values, "values to sweep; 'all' for every free cell with P")->delimiter(',');
    sw->add_option("--algos", algos, "algorithms to run")->delimiter(',');

    std::string fixture_name;
    std::uint64_t fixture_seed = 1;
    auto* fx = app.add_subcommand("fixture", "write a built-in scenario as JSON");
    fx->add_option("--name", fixture_name, "tiny, warehouse, artificial-floor, random-20, random-30")->required();
    fx->add_option("--seed", fixture_seed, "seed for random layouts");
    fx->add_option("--out", out, "output path (default stdout)");

    int cycles = 3;
    auto* rp = app.add_subcommand("replay", "repeat a bundle and check every cycle matches the first");
    add_common(rp, c, false);
    rp->add_option("--bundle", bundle, "bundle JSON")->required();
    rp->add_option("--cycles", cycles, "cycles to play")->check(CLI::PositiveNumber);

    double jitter = 0.0;
    auto* sim = app.add_subcommand("simulate", "replay under random step delays with sync barriers");
    add_common(sim, c, false);
    sim->add_option("--bundle", bundle, "bundle JSON")->required();
    sim->add_option("--cycles", cycles, "cycles to simulate")->check(CLI::PositiveNumber);
    sim->add_option("--jitter", jitter, "maximum extra delay per step, in steps")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*plan) return cmd_plan(c, algo);
        if (*val) return cmd_validate(c, bundle);
        if (*ren) return cmd_render(c, bundle, out);
        if (*sw) return cmd_sweep(c, kind, values, algos);
        if (*fx) return cmd_fixture(fixture_name, fixture_seed, out);
        if (*rp) return cmd_replay(c, bundle, cycles);
        if (*sim) return cmd_simulate(c, bundle, cycles, jitter);
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "invalid input:\n");
        for (const auto& d : e.diagnostics()) std::fprintf(stderr, "  %s\n", d.c_str());
        return kInvalid;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kInvalid;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return kInvalid;
    } catch (const BridgeError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kTimeout;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kInfeasible;
    }
    return kOk;
}
