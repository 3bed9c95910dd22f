#include "mrp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

#include "mrp/error.hpp"
#include "mrp/executor.hpp"
#include "mrp/greedy.hpp"
#include "mrp/oneshot.hpp"
#include "mrp/twoshot.hpp"

namespace mrp {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::OneShot: return "oneshot";
        case Algorithm::TwoShot: return "twoshot";
        case Algorithm::Greedy: return "greedy";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "oneshot") return Algorithm::OneShot;
    if (s == "twoshot") return Algorithm::TwoShot;
    if (s == "greedy") return Algorithm::Greedy;
    throw ParseError("unknown algorithm '" + s + "'");
}

std::string to_string(SweepKind k) {
    switch (k) {
        case SweepKind::Horizon: return "T";
        case SweepKind::Starts: return "P";
        case SweepKind::DeltaMax: return "delta_max";
        case SweepKind::AlgoCompare: return "algo-compare";
    }
    return "?";
}

SweepKind sweep_kind_from_string(const std::string& s) {
    if (s == "T") return SweepKind::Horizon;
    if (s == "P") return SweepKind::Starts;
    if (s == "delta_max") return SweepKind::DeltaMax;
    if (s == "algo-compare") return SweepKind::AlgoCompare;
    throw ParseError("unknown sweep kind '" + s + "'");
}

std::vector<int> default_sweep_values(SweepKind k) {
    switch (k) {
        case SweepKind::Horizon: return {20, 25, 30};
        case SweepKind::Starts: return {2, 4, 8, 16, 0};
        case SweepKind::DeltaMax: return {4, 6, 8, 10, 14};
        case SweepKind::AlgoCompare: return {0};
    }
    return {};
}

PlanOutcome run_planner(const Scenario& s, const PlanRequest& req) {
    const auto t0 = std::chrono::steady_clock::now();
    PlanOutcome out;
    auto done = [&] {
        out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (out.bundle) out.bundle->runtime_seconds = out.seconds;
        return out;
    };
    auto cfg = req.solver;
    cfg.timeout_seconds = req.timeout_seconds;
    switch (req.algorithm) {
        case Algorithm::OneShot: {
            OneShotOptions o;
            o.solver = cfg;
            auto r = plan_oneshot(s, o);
            if (r.bundle) {
                out.status = PlanStatus::Ok;
                out.bundle = std::move(r.bundle);
                out.message = smt::to_string(r.status);
            } else {
                out.status = r.status == smt::Status::Timeout ? PlanStatus::Timeout : PlanStatus::Infeasible;
                out.message = r.status == smt::Status::Timeout ? "no plan within the time budget"
                                                               : "no plan satisfies the state matchings at this horizon";
            }
            return done();
        }
        case Algorithm::TwoShot: {
            TwoShotOptions o;
            o.solver = req.solver;
            o.phase_one_seconds = req.timeout_seconds;
            o.probe_seconds = std::min(600.0, req.timeout_seconds);
            o.travel_seconds = std::min(120.0, req.timeout_seconds);
            auto p1 = phase_one(s, o);
            if (!p1.diagnostic.empty()) {
                out.status = p1.status == smt::Status::Timeout ? PlanStatus::Timeout : PlanStatus::Infeasible;
                out.message = p1.diagnostic;
                return done();
            }
            try {
                auto p2 = phase_two(s, p1, o);
                out.status = PlanStatus::Ok;
                out.bundle = std::move(p2.bundle);
                out.message = out.bundle->solve_status;
            } catch (const PlanningError& e) {
                out.status = PlanStatus::Infeasible;
                out.message = e.what();
            }
            return done();
        }
        case Algorithm::Greedy: {
            try {
                out.bundle = plan_greedy(s);
                out.status = PlanStatus::Ok;
            } catch (const PlanningError& e) {
                out.status = PlanStatus::Infeasible;
                out.message = e.what();
            } catch (const DomainError& e) {
                out.status = PlanStatus::Infeasible;
                out.message = e.what();
            }
            return done();
        }
    }
    return done();
}

Scenario sweep_variant(const Scenario& base, SweepKind kind, int value) {
    Scenario s = base;
    switch (kind) {
        case SweepKind::Horizon:
            s.horizon = value;
            break;
        case SweepKind::Starts:
            if (value == 0) {
                std::set<Cell> on;
                for (const auto& w : s.workers)
                    for (Cell c : w.loop.cells()) on.insert(c);
                s.potential_starts.clear();
                for (Cell c : s.workspace.free_cells())
                    if (!on.count(c)) s.potential_starts.push_back(c);
            } else {
                if (value < 0 || static_cast<std::size_t>(value) > base.potential_starts.size())
                    throw DomainError("|P| = " + std::to_string(value) + " exceeds the declared potential starts");
                s.potential_starts.resize(static_cast<std::size_t>(value));
            }
            break;
        case SweepKind::DeltaMax:
            if (value <= 0) throw DomainError("delta_max must be positive");
            s.delta_max = static_cast<Energy>(value) * s.energy_scale;
            break;
        case SweepKind::AlgoCompare:
            break;
    }
    return s;
}

namespace {

std::string label(SweepKind k, int v) {
    switch (k) {
        case SweepKind::Horizon: return "T=" + std::to_string(v);
        case SweepKind::Starts: return v == 0 ? "|P|=all" : "|P|=" + std::to_string(v);
        case SweepKind::DeltaMax: return "delta_max=" + std::to_string(v);
        case SweepKind::AlgoCompare: return "base";
    }
    return "";
}

std::string status_name(PlanStatus s) {
    switch (s) {
        case PlanStatus::Ok: return "ok";
        case PlanStatus::Infeasible: return "infeasible";
        case PlanStatus::Timeout: return "timeout";
    }
    return "?";
}

std::string fmt(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

}  // namespace

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepOptions& o) {
    std::vector<int> values = o.kind == SweepKind::AlgoCompare ? std::vector<int>{0} : o.values;
    if (values.empty()) values = default_sweep_values(o.kind);
    if (o.algorithms.empty()) throw DomainError("sweep needs at least one algorithm");
    struct Cell_ {
        int value;
        Algorithm algo;
    };
    std::vector<Cell_> cells;
    for (int v : values)
        for (Algorithm a : o.algorithms) cells.push_back({v, a});
    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t k; (k = next++) < cells.size();) {
            try {
                const auto& c = cells[k];
                Scenario s = sweep_variant(base, o.kind, c.value);
                PlanRequest req = o.request;
                req.algorithm = c.algo;
                if (!req.solver.seed) req.solver.seed = o.seed;
                const auto out = run_planner(s, req);
                SweepRow r;
                r.parameter = label(o.kind, c.value);
                r.value = c.value;
                r.algorithm = to_string(c.algo);
                r.status = status_name(out.status);
                r.T = s.horizon;
                r.seconds = out.seconds;
                if (out.bundle) {
                    const auto e = efficiency(*out.bundle, s);
                    r.T_prime = out.bundle->T_prime;
                    r.E = e.E;
                    r.work_percent = e.work_percent;
                    r.recharge_percent = e.recharge_percent;
                }
                rows[k] = r;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(o.jobs, static_cast<int>(cells.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

std::string sweep_csv(const Scenario& base, const SweepOptions& o, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "# scenario_digest=" << scenario_digest(base) << " kind=" << to_string(o.kind) << " algorithms=";
    for (std::size_t k = 0; k < o.algorithms.size(); ++k) out << (k ? "," : "") << to_string(o.algorithms[k]);
    out << " solver=";
    for (std::size_t k = 0; k < o.request.solver.command.size(); ++k) out << (k ? " " : "") << o.request.solver.command[k];
    out << " timeout_seconds=" << fmt(o.request.timeout_seconds, 0) << " seed=" << o.seed << "\n";
    out << "parameter,value,algorithm,status,T,T_prime,E,work_percent,recharge_percent,runtime_seconds\n";
    for (const auto& r : rows)
        out << r.parameter << ',' << r.value << ',' << r.algorithm << ',' << r.status << ',' << r.T << ',' << r.T_prime
            << ',' << fmt(r.E) << ',' << fmt(r.work_percent) << ',' << fmt(r.recharge_percent) << ','
            << fmt(r.seconds, 3) << '\n';
    return out.str();
}

std::string sweep_svg(const std::vector<SweepRow>& rows, const std::string& title) {
    std::vector<std::string> groups, algos;
    for (const auto& r : rows) {
        if (std::find(groups.begin(), groups.end(), r.parameter) == groups.end()) groups.push_back(r.parameter);
        if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end()) algos.push_back(r.algorithm);
    }
    const char* colours[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
    const int bar = 28, gap = 24, left = 50, top = 40, plot_h = 240;
    const int group_w = static_cast<int>(algos.size()) * bar + gap;
    const int width = left + std::max<int>(1, static_cast<int>(groups.size())) * group_w + 20;
    const int height = top + plot_h + 70;
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    o << "<text x=\"" << left << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
    for (int pct = 0; pct <= 100; pct += 25) {
        const int y = top + plot_h - pct * plot_h / 100;
        o << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - 10 << "\" y2=\"" << y
          << "\" stroke=\"#dddddd\"/>\n";
        o << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
          << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << pct << "</text>\n";
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const int gx = left + static_cast<int>(gi) * group_w + gap / 2;
        for (const auto& r : rows) {
            if (r.parameter != groups[gi]) continue;
            const auto ai = static_cast<std::size_t>(std::find(algos.begin(), algos.end(), r.algorithm) - algos.begin());
            const int h = static_cast<int>(r.E * plot_h / 100.0);
            const int x = gx + static_cast<int>(ai) * bar;
            o << "<rect x=\"" << x << "\" y=\"" << top + plot_h - h << "\" width=\"" << bar - 4 << "\" height=\"" << h
              << "\" fill=\"" << colours[ai % 3] << "\"><title>" << r.algorithm << ' ' << fmt(r.E) << "%</title></rect>\n";
            o << "<text x=\"" << x + (bar - 4) / 2 << "\" y=\"" << top + plot_h - h - 3
              << "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">" << fmt(r.E, 1) << "</text>\n";
        }
        o << "<text x=\"" << gx + static_cast<int>(algos.size()) * bar / 2 << "\" y=\"" << top + plot_h + 16
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << groups[gi] << "</text>\n";
    }
    for (std::size_t ai = 0; ai < algos.size(); ++ai) {
        const int x = left + static_cast<int>(ai) * 110;
        o << "<rect x=\"" << x << "\" y=\"" << height - 28 << "\" width=\"12\" height=\"12\" fill=\"" << colours[ai % 3]
          << "\"/>\n<text x=\"" << x + 16 << "\" y=\"" << height - 18 << "\" font-family=\"sans-serif\" font-size=\"11\">"
          << algos[ai] << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace mrp
