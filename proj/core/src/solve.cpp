#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "mrp/error.hpp"
#include "mrp/smt.hpp"

namespace mrp::smt {

std::string to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Satisfiable: return "satisfiable";
        case Status::Unsatisfiable: return "unsatisfiable";
        case Status::Timeout: return "timeout";
    }
    return "?";
}

SolverConfig default_solver_config() {
    SolverConfig cfg;
    const char* env = std::getenv("MRP_SOLVER");
    cfg.command = {env && *env ? env : "z3", "-in"};
    return cfg;
}

Dialect dialect_for(const SolverConfig& cfg) {
    if (cfg.dialect) return *cfg.dialect;
    if (!cfg.command.empty() &&
        std::filesystem::path(cfg.command.front()).filename().string().find("z3") != std::string::npos)
        return z3_dialect();
    return portable_dialect();
}

namespace {

std::string excerpt(const std::string& s) {
    constexpr std::size_t kMax = 600;
    return s.size() <= kMax ? s : s.substr(0, kMax) + "...";
}

std::optional<std::int64_t> value_of(const SExpr& e) {
    if (e.is_atom()) {
        if (e.atom == "true") return 1;
        if (e.atom == "false") return 0;
        try {
            std::size_t used = 0;
            auto v = std::stoll(e.atom, &used);
            if (used == e.atom.size()) return v;
        } catch (const std::exception&) {
        }
        return std::nullopt;
    }
    if (e.list.size() == 2 && e.list[0].atom == "-") {
        auto v = value_of(e.list[1]);
        if (v) return -*v;
    }
    return std::nullopt;
}

}  // namespace

SolveOutcome parse_solver_output(const Program& p, const std::string& out, bool objectives_complete) {
    std::vector<SExpr> items;
    try {
        items = parse_sexprs(out);
    } catch (const ParseError& e) {
        throw BridgeError(std::string("unparsable solver output (") + e.what() + ")", excerpt(out));
    }
    SolveOutcome r;
    std::size_t k = 0;
    std::string verdict;
    for (; k < items.size(); ++k) {
        const auto& it = items[k];
        if (it.is_atom() && (it.atom == "sat" || it.atom == "unsat" || it.atom == "unknown")) {
            verdict = it.atom;
            ++k;
            break;
        }
        if (!it.is_atom() && !it.list.empty() && it.list[0].atom == "error")
            throw BridgeError("solver reported an error", excerpt(out));
        // Anything else before the verdict (e.g. objective echoes) is ignored.
    }
    if (verdict.empty()) throw BridgeError("solver produced no check-sat verdict", excerpt(out));
    if (verdict == "unsat") {
        r.status = Status::Unsatisfiable;
        return r;
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < p.vars().size(); ++i) index[p.vars()[i].name] = i;
    Model m;
    m.values.assign(p.vars().size(), 0);
    m.present.assign(p.vars().size(), false);
    bool got_values = false;
    for (; k < items.size(); ++k) {
        const auto& it = items[k];
        if (it.is_atom()) continue;
        if (!it.list.empty() && it.list[0].atom == "error") continue;  // e.g. no model after unknown
        if (!it.list.empty() && it.list[0].atom == "objectives") continue;
        for (const auto& pair : it.list) {
            if (pair.is_atom() || pair.list.size() != 2 || !pair.list[0].is_atom()) continue;
            auto found = index.find(pair.list[0].atom);
            if (found == index.end()) continue;
            auto v = value_of(pair.list[1]);
            if (!v) throw BridgeError("unexpected value for " + pair.list[0].atom, excerpt(out));
            m.values[found->second] = *v;
            m.present[found->second] = true;
            got_values = true;
        }
    }
    if (verdict == "sat") {
        if (!got_values && !p.vars().empty())
            throw BridgeError("solver answered sat without a model", excerpt(out));
        r.status = objectives_complete ? Status::Optimal : Status::Satisfiable;
    } else {
        r.status = got_values ? Status::Satisfiable : Status::Timeout;
    }
    if (got_values || p.vars().empty()) {
        r.model = std::move(m);
        for (const auto& o : p.objectives()) r.objective_values.push_back(evaluate(p, *r.model, o.term));
    }
    return r;
}

namespace {

SolveOutcome solve_once(const Program& p, const SolverConfig& cfg, const Dialect& d,
                        std::chrono::steady_clock::time_point deadline, const std::string& dump) {
    const auto start = std::chrono::steady_clock::now();
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - start);
    if (left.count() <= 0) {
        SolveOutcome r;
        r.status = Status::Timeout;
        return r;
    }
    EmitOptions eo;
    eo.dialect = d;
    eo.timeout_ms = left.count();
    eo.seed = cfg.seed;
    const std::string text = emit_smtlib(p, eo);
    if (!dump.empty()) {
        const std::filesystem::path path(dump);
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        std::ofstream f(path, std::ios::binary);
        f << text;
        if (!f) throw Error("cannot write " + dump);
    }
    // Hard limit: the solver's own timeout plus a grace period to print its best model.
    const auto grace = std::chrono::milliseconds(10000 + left.count() / 20);
    const auto res = run_process(cfg.command, text, left + grace);
    SolveOutcome r;
    if (res.timed_out) {
        r.status = Status::Timeout;
    } else {
        if (res.out.find("sat") == std::string::npos && res.out.find("unknown") == std::string::npos)
            throw BridgeError("solver exited with code " + std::to_string(res.exit_code),
                              excerpt(res.err.empty() ? res.out : res.err));
        r = parse_solver_output(p, res.out, true);
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// Interval of values a term can take, from variable bounds alone.
std::pair<std::int64_t, std::int64_t> term_range(const Program& p, Term t) {
    const Node& n = p.node(t);
    switch (n.op) {
        case Op::IntConst: return {n.value, n.value};
        case Op::Var: {
            const auto& v = p.vars()[static_cast<std::size_t>(n.value)];
            if (v.sort == Sort::Bool) return {0, 1};
            return {v.lo.value_or(std::numeric_limits<std::int32_t>::min()),
                    v.hi.value_or(std::numeric_limits<std::int32_t>::max())};
        }
        case Op::Add: {
            std::int64_t lo = 0, hi = 0;
            for (Term a : n.args) {
                auto [l, h] = term_range(p, a);
                lo += l;
                hi += h;
            }
            return {lo, hi};
        }
        case Op::Mul: {
            auto [l, h] = term_range(p, n.args[0]);
            return {std::min(n.value * l, n.value * h), std::max(n.value * l, n.value * h)};
        }
        case Op::Ite: {
            auto [l1, h1] = term_range(p, n.args[1]);
            auto [l2, h2] = term_range(p, n.args[2]);
            return {std::min(l1, l2), std::max(h1, h2)};
        }
        default: return {std::numeric_limits<std::int32_t>::min(), std::numeric_limits<std::int32_t>::max()};
    }
}

SolveOutcome descend(const Program& p, const SolverConfig& cfg, const Dialect& d,
                     std::chrono::steady_clock::time_point deadline) {
    using clock = std::chrono::steady_clock;
    Program work = p.with_objectives({});
    // Only a "sat" verdict (reported as Optimal for an objective-free query)
    // yields a trustworthy model; values printed after "unknown" are not.
    SolveOutcome best = solve_once(work, cfg, d, deadline, cfg.dump_path);
    if (best.status != Status::Optimal) {
        if (best.status != Status::Unsatisfiable) best = SolveOutcome{};
        return best;
    }
    bool proven = true;
    for (const auto& obj : p.objectives()) {
        std::int64_t hi = evaluate(p, *best.model, obj.term);
        std::int64_t floor = term_range(p, obj.term).first;
        bool exact = true;
        while (floor < hi) {
            const auto now = clock::now();
            if (now >= deadline) {
                exact = false;
                break;
            }
            const std::int64_t mid = floor + (hi - floor) / 2;
            Program q = work;
            q.require(q.le(obj.term, q.constant(mid)));
            // one query may not eat the whole budget unless it is the last one
            const auto left = deadline - now;
            const auto cap = hi - floor <= 1 ? left : std::max<clock::duration>(left / 3, std::chrono::seconds(1));
            const auto out = solve_once(q, cfg, d, std::min(deadline, now + cap), "");
            if (out.status == Status::Optimal) {
                best.model = out.model;
                hi = evaluate(p, *best.model, obj.term);
            } else {
                if (out.status != Status::Unsatisfiable) exact = false;
                floor = mid + 1;
            }
        }
        if (!exact) {
            proven = false;
            break;
        }
        work.require(work.eq(obj.term, work.constant(hi)));
    }
    best.status = proven ? Status::Optimal : Status::Satisfiable;
    best.objective_values.clear();
    for (const auto& o : p.objectives()) best.objective_values.push_back(evaluate(p, *best.model, o.term));
    return best;
}

}  // namespace

SolveOutcome solve(const Program& p, const SolverConfig& cfg) {
    const Dialect d = dialect_for(cfg);
    const auto start = std::chrono::steady_clock::now();
    const auto deadline =
        start + std::chrono::milliseconds(static_cast<std::int64_t>(cfg.timeout_seconds * 1000.0));
    if (cfg.descent && !p.objectives().empty()) {
        auto r = descend(p, cfg, d, deadline);
        r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return r;
    }
    if (d.native_lexicographic || p.objectives().size() <= 1) return solve_once(p, cfg, d, deadline, cfg.dump_path);

    // Two-pass (n-pass) lexicographic: fix each optimum before the next objective.
    Program work = p.with_objectives({});
    SolveOutcome last, best;
    bool all_optimal = true;
    for (std::size_t k = 0; k < p.objectives().size(); ++k) {
        Program pass = work.with_objectives({p.objectives()[k]});
        const std::string dump = cfg.dump_path.empty() ? "" : cfg.dump_path + ".pass" + std::to_string(k + 1);
        last = solve_once(pass, cfg, d, deadline, dump);
        if (last.model) best = last;
        if (last.status != Status::Optimal) {
            all_optimal = false;
            break;
        }
        work.require(work.eq(p.objectives()[k].term, work.constant(last.objective_values.front())));
    }
    SolveOutcome r = best.model ? best : last;
    if (r.model) {
        r.status = all_optimal ? Status::Optimal : Status::Satisfiable;
        r.objective_values.clear();
        for (const auto& o : p.objectives()) r.objective_values.push_back(evaluate(p, *r.model, o.term));
    }
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace mrp::smt
