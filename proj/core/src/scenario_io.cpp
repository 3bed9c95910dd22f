// JSON persistence for scenarios and plan bundles.
#include <openssl/evp.h>

#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "mrp/error.hpp"
#include "mrp/scenario.hpp"

namespace mrp {

using ojson = nlohmann::ordered_json;

namespace {

constexpr int kScenarioFormat = 1;
constexpr int kBundleFormat = 1;
constexpr const char* kDefaultSet = "unit4";

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw ParseError(field + ": " + what);
}

const ojson& need(const ojson& j, const char* key, const std::string& field) {
    auto it = j.find(key);
    if (it == j.end()) bad(field, std::string("missing '") + key + "'");
    return *it;
}

int as_int(const ojson& j, const std::string& field) {
    if (!j.is_number_integer()) bad(field, "expected an integer");
    return j.get<int>();
}

Cell as_cell(const ojson& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
        bad(field, "expected [x, y]");
    return {j[0].get<int>(), j[1].get<int>()};
}

ojson cell_json(Cell c) { return ojson::array({c.x, c.y}); }

Energy scaled(const ojson& j, int scale, const std::string& field) {
    if (!j.is_number()) bad(field, "expected a number");
    const double v = j.get<double>() * scale;
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
        bad(field, "value is not a multiple of 1/energy_scale");
    return static_cast<Energy>(r);
}

ojson nominal(Energy e, int scale) {
    if (e % scale == 0) return ojson(e / scale);
    return ojson(static_cast<double>(e) / scale);
}

ojson primitive_json(const MotionPrimitive& p, int scale) {
    ojson j;
    j["name"] = p.name;
    j["disp"] = cell_json(p.disp);
    j["cost"] = nominal(p.cost, scale);
    if (p.intermediate != std::vector<Cell>{{0, 0}, p.disp}) {
        ojson via = ojson::array();
        for (Cell c : p.intermediate) via.push_back(cell_json(c));
        j["intermediate"] = via;
    }
    if (p.v_from != kStationary) j["v_from"] = p.v_from.id;
    if (p.v_to != kStationary) j["v_to"] = p.v_to.id;
    return j;
}

MotionPrimitive primitive_from(const ojson& j, int scale, const std::string& f) {
    if (!j.is_object()) bad(f, "expected a primitive object");
    MotionPrimitive p;
    const auto& name = need(j, "name", f);
    if (!name.is_string()) bad(f + ".name", "expected a string");
    p.name = name.get<std::string>();
    p.disp = as_cell(need(j, "disp", f), f + ".disp");
    p.cost = scaled(need(j, "cost", f), scale, f + ".cost");
    if (auto it = j.find("intermediate"); it != j.end()) {
        if (!it->is_array()) bad(f + ".intermediate", "expected an array");
        for (std::size_t k = 0; k < it->size(); ++k)
            p.intermediate.push_back(as_cell((*it)[k], f + ".intermediate"));
    } else {
        p.intermediate = {{0, 0}, p.disp};
    }
    if (auto it = j.find("v_from"); it != j.end()) p.v_from.id = as_int(*it, f + ".v_from");
    if (auto it = j.find("v_to"); it != j.end()) p.v_to.id = as_int(*it, f + ".v_to");
    try {
        p.check();
    } catch (const DomainError& e) {
        bad(f, e.what());
    }
    return p;
}

std::vector<MotionPrimitive> resolve_set(const Scenario& s, const std::string& name,
                                         const std::string& f) {
    auto it = s.primitive_sets.find(name);
    if (it == s.primitive_sets.end()) bad(f, "unknown primitive set '" + name + "'");
    return it->second;
}

ojson scenario_json(const Scenario& s, bool with_name) {
    ojson j;
    j["format_version"] = kScenarioFormat;
    if (with_name) j["name"] = s.name;
    ojson rows = ojson::array();
    for (int y = 0; y < s.workspace.height(); ++y) {
        std::string r;
        for (int x = 0; x < s.workspace.width(); ++x) r += s.workspace.is_free({x, y}) ? '.' : '#';
        rows.push_back(r);
    }
    j["map"] = {{"width", s.workspace.width()}, {"height", s.workspace.height()}, {"rows", rows}};
    j["energy_scale"] = s.energy_scale;
    j["delta_max"] = nominal(s.delta_max, s.energy_scale);
    j["horizon"] = s.horizon;
    j["objective"] = {{"mode", to_string(s.objective_mode)}, {"w1", s.w1}, {"w2", s.w2}};
    ojson sets = ojson::object();
    for (const auto& [name, prims] : s.primitive_sets) {
        ojson arr = ojson::array();
        for (const auto& p : prims) arr.push_back(primitive_json(p, s.energy_scale));
        sets[name] = arr;
    }
    j["primitive_sets"] = sets;
    ojson workers = ojson::array();
    for (const auto& w : s.workers) {
        ojson pts = ojson::array(), mvs = ojson::array();
        for (Cell c : w.loop.points()) pts.push_back(cell_json(c));
        for (const auto& m : w.loop.moves()) mvs.push_back(m.name);
        workers.push_back({{"id", w.id},
                           {"emax", nominal(w.emax, s.energy_scale)},
                           {"primitives", w.primitive_set},
                           {"loop", {{"points", pts}, {"moves", mvs}}}});
    }
    j["workers"] = workers;
    ojson rechargers = ojson::array();
    for (const auto& r : s.rechargers)
        rechargers.push_back({{"id", r.id}, {"primitives", r.primitive_set}});
    j["rechargers"] = rechargers;
    ojson P = ojson::array();
    for (Cell c : s.potential_starts) P.push_back(cell_json(c));
    j["potential_starts"] = P;
    return j;
}

Workspace map_from(const ojson& m, const std::filesystem::path& base_dir) {
    if (m.is_string()) {
        auto p = std::filesystem::path(m.get<std::string>());
        if (p.is_relative()) p = base_dir / p;
        return parse_grid_map(read_text_file(p));
    }
    if (!m.is_object()) bad("map", "expected an object or a path string");
    if (auto it = m.find("path"); it != m.end()) {
        if (!it->is_string()) bad("map.path", "expected a string");
        auto p = std::filesystem::path(it->get<std::string>());
        if (p.is_relative()) p = base_dir / p;
        return parse_grid_map(read_text_file(p));
    }
    const int w = as_int(need(m, "width", "map"), "map.width");
    const int h = as_int(need(m, "height", "map"), "map.height");
    const auto& rows = need(m, "rows", "map");
    if (!rows.is_array()) bad("map.rows", "expected an array of strings");
    std::string text = std::to_string(w) + " " + std::to_string(h) + "\n";
    for (const auto& r : rows) {
        if (!r.is_string()) bad("map.rows", "expected strings");
        text += r.get<std::string>() + "\n";
    }
    return parse_grid_map(text);
}

}  // namespace

std::string scenario_to_json(const Scenario& s, int indent) {
    return scenario_json(s, true).dump(indent) + (indent >= 0 ? "\n" : "");
}

std::string scenario_digest(const Scenario& s) {
    // nlohmann::json keeps object keys sorted, which gives the canonical form.
    const nlohmann::json canon = nlohmann::json::parse(scenario_json(s, false).dump());
    const std::string text = canon.dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed");
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return hex.str();
}

Scenario scenario_from_json(const std::string& text, const std::filesystem::path& base_dir) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario JSON: ") + e.what());
    }
    if (!j.is_object()) bad("scenario", "expected a JSON object");
    if (auto it = j.find("format_version"); it == j.end() || as_int(*it, "format_version") != kScenarioFormat)
        bad("format_version", "expected " + std::to_string(kScenarioFormat));

    Scenario s;
    if (auto it = j.find("name"); it != j.end() && it->is_string()) s.name = it->get<std::string>();
    s.workspace = map_from(need(j, "map", "scenario"), base_dir);
    if (auto it = j.find("energy_scale"); it != j.end()) s.energy_scale = as_int(*it, "energy_scale");
    if (s.energy_scale < 1) bad("energy_scale", "must be at least 1");
    s.delta_max = scaled(need(j, "delta_max", "scenario"), s.energy_scale, "delta_max");
    s.horizon = as_int(need(j, "horizon", "scenario"), "horizon");
    if (auto it = j.find("objective"); it != j.end()) {
        if (auto m = it->find("mode"); m != it->end()) s.objective_mode = objective_mode_from_string(m->get<std::string>());
        if (auto w = it->find("w1"); w != it->end()) s.w1 = w->get<std::int64_t>();
        if (auto w = it->find("w2"); w != it->end()) s.w2 = w->get<std::int64_t>();
    }
    if (auto it = j.find("primitive_sets"); it != j.end()) {
        if (!it->is_object()) bad("primitive_sets", "expected an object");
        for (const auto& [name, arr] : it->items()) {
            const std::string f = "primitive_sets." + name;
            if (!arr.is_array()) bad(f, "expected an array");
            std::vector<MotionPrimitive> prims;
            for (std::size_t k = 0; k < arr.size(); ++k)
                prims.push_back(primitive_from(arr[k], s.energy_scale, f + "[" + std::to_string(k) + "]"));
            s.primitive_sets[name] = std::move(prims);
        }
    }
    if (!s.primitive_sets.count(kDefaultSet))
        s.primitive_sets[kDefaultSet] = four_connected_primitives(s.energy_scale);

    const auto& workers = need(j, "workers", "scenario");
    if (!workers.is_array()) bad("workers", "expected an array");
    for (std::size_t i = 0; i < workers.size(); ++i) {
        const auto& wj = workers[i];
        const std::string f = "workers[" + std::to_string(i) + "]";
        WorkerSpec w;
        w.id = wj.contains("id") ? as_int(wj["id"], f + ".id") : static_cast<int>(i);
        w.emax = scaled(need(wj, "emax", f), s.energy_scale, f + ".emax");
        w.primitive_set = wj.contains("primitives") ? wj["primitives"].get<std::string>() : kDefaultSet;
        w.primitives = resolve_set(s, w.primitive_set, f + ".primitives");
        const auto& lj = need(wj, "loop", f);
        const auto& pts = need(lj, "points", f + ".loop");
        if (!pts.is_array()) bad(f + ".loop.points", "expected an array");
        std::vector<Cell> points;
        for (const auto& p : pts) points.push_back(as_cell(p, f + ".loop.points"));
        std::vector<MotionPrimitive> moves;
        if (auto mv = lj.find("moves"); mv != lj.end()) {
            for (const auto& n : *mv) {
                if (!n.is_string()) bad(f + ".loop.moves", "expected primitive names");
                auto name = n.get<std::string>();
                auto hit = std::find_if(w.primitives.begin(), w.primitives.end(),
                                        [&](const MotionPrimitive& p) { return p.name == name; });
                if (hit == w.primitives.end())
                    bad(f + ".loop.moves", "primitive " + name + " not in set " + w.primitive_set);
                moves.push_back(*hit);
            }
        } else {
            // Infer each move from the displacement between consecutive points.
            for (std::size_t k = 0; k + 1 < points.size(); ++k) {
                Cell d = points[k + 1] - points[k];
                auto hit = std::find_if(w.primitives.begin(), w.primitives.end(),
                                        [&](const MotionPrimitive& p) { return p.disp == d; });
                if (hit == w.primitives.end())
                    bad(f + ".loop.points", "no primitive for step " + to_string(points[k]) +
                                                " -> " + to_string(points[k + 1]));
                moves.push_back(*hit);
            }
        }
        try {
            w.loop = WorkingLoop(std::move(points), std::move(moves));
        } catch (const DomainError& e) {
            bad(f + ".loop", e.what());
        }
        s.workers.push_back(std::move(w));
    }
    const auto& rechargers = need(j, "rechargers", "scenario");
    if (!rechargers.is_array()) bad("rechargers", "expected an array");
    for (std::size_t k = 0; k < rechargers.size(); ++k) {
        const auto& rj = rechargers[k];
        const std::string f = "rechargers[" + std::to_string(k) + "]";
        RechargerSpec r;
        r.id = rj.contains("id") ? as_int(rj["id"], f + ".id") : static_cast<int>(k);
        r.primitive_set = rj.contains("primitives") ? rj["primitives"].get<std::string>() : kDefaultSet;
        r.primitives = resolve_set(s, r.primitive_set, f + ".primitives");
        s.rechargers.push_back(std::move(r));
    }
    if (auto it = j.find("potential_starts"); it != j.end()) {
        if (!it->is_array()) bad("potential_starts", "expected an array");
        for (const auto& c : *it) s.potential_starts.push_back(as_cell(c, "potential_starts"));
    } else {
        s.potential_starts = s.workspace.free_cells();
    }
    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    auto s = scenario_from_json(read_text_file(path), path.parent_path());
    if (s.name.empty()) s.name = path.stem().string();
    return s;
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    write_text_file(path, scenario_to_json(s));
}

// --- bundles ---------------------------------------------------------------

namespace {

ojson action_json(const Primitive& p) {
    if (std::holds_alternative<Wait>(p)) return "wait";
    if (const auto* r = std::get_if<Recharge>(&p)) return {{"recharge", r->delta}};
    const auto& m = std::get<MotionPrimitive>(p);
    ojson j = {{"move", m.name}, {"disp", cell_json(m.disp)}, {"cost", m.cost}};
    if (m.intermediate != std::vector<Cell>{{0, 0}, m.disp}) {
        ojson via = ojson::array();
        for (Cell c : m.intermediate) via.push_back(cell_json(c));
        j["intermediate"] = via;
    }
    if (m.v_from != kStationary) j["v_from"] = m.v_from.id;
    if (m.v_to != kStationary) j["v_to"] = m.v_to.id;
    return j;
}

Primitive action_from(const ojson& j, const std::string& f) {
    if (j.is_string()) {
        if (j.get<std::string>() != "wait") bad(f, "unknown action '" + j.get<std::string>() + "'");
        return Wait{};
    }
    if (!j.is_object()) bad(f, "expected an action");
    if (auto it = j.find("recharge"); it != j.end()) {
        if (!it->is_number_integer()) bad(f, "recharge amount must be an integer");
        return Recharge{it->get<Energy>()};
    }
    ojson p = j;
    p["name"] = need(j, "move", f);
    p.erase("move");
    return primitive_from(p, 1, f);
}

ojson plan_json(const RobotPlan& p) {
    ojson acts = ojson::array(), traj = ojson::array();
    for (const auto& a : p.actions) acts.push_back(action_json(a));
    for (const auto& s : p.trajectory) {
        ojson st = {{"p", cell_json(s.p)}, {"e", s.e}};
        if (s.v != kStationary) st["v"] = s.v.id;
        traj.push_back(st);
    }
    return {{"actions", acts}, {"trajectory", traj}};
}

RobotPlan plan_from(const ojson& j, const std::string& f) {
    RobotPlan p;
    const auto& acts = need(j, "actions", f);
    for (std::size_t k = 0; k < acts.size(); ++k)
        p.actions.push_back(action_from(acts[k], f + ".actions[" + std::to_string(k) + "]"));
    const auto& traj = need(j, "trajectory", f);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const std::string g = f + ".trajectory[" + std::to_string(k) + "]";
        RobotState s;
        s.p = as_cell(need(traj[k], "p", g), g + ".p");
        s.e = need(traj[k], "e", g).get<Energy>();
        if (traj[k].contains("v")) s.v.id = as_int(traj[k]["v"], g + ".v");
        p.trajectory.push_back(s);
    }
    return p;
}

}  // namespace

std::string bundle_to_json(const PlanBundle& b, int indent) {
    ojson j;
    j["format_version"] = kBundleFormat;
    j["scenario_digest"] = b.scenario_digest;
    j["algorithm"] = b.algorithm;
    j["energy_scale"] = b.energy_scale;
    j["T"] = b.T;
    j["T_prime"] = b.T_prime;
    j["solve_status"] = b.solve_status;
    j["runtime_seconds"] = b.runtime_seconds;
    ojson starts = ojson::array();
    for (Cell c : b.recharger_starts) starts.push_back(cell_json(c));
    j["recharger_starts"] = starts;
    ojson ws = ojson::array(), rs = ojson::array();
    for (const auto& p : b.workers) ws.push_back(plan_json(p));
    for (const auto& p : b.rechargers) rs.push_back(plan_json(p));
    j["workers"] = ws;
    j["rechargers"] = rs;
    ojson ev = ojson::array();
    for (const auto& e : b.events)
        ev.push_back({{"step", e.step},
                      {"worker", e.worker},
                      {"recharger", e.recharger},
                      {"delta", e.delta},
                      {"cell", cell_json(e.cell)},
                      {"recharger_cell", cell_json(e.recharger_cell)}});
    j["recharge_events"] = ev;
    return j.dump(indent) + (indent >= 0 ? "\n" : "");
}

PlanBundle bundle_from_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bundle JSON: ") + e.what());
    }
    if (!j.is_object()) bad("bundle", "expected a JSON object");
    if (as_int(need(j, "format_version", "bundle"), "format_version") != kBundleFormat)
        bad("format_version", "expected " + std::to_string(kBundleFormat));
    PlanBundle b;
    try {
        b.scenario_digest = need(j, "scenario_digest", "bundle").get<std::string>();
        b.algorithm = need(j, "algorithm", "bundle").get<std::string>();
        b.energy_scale = as_int(need(j, "energy_scale", "bundle"), "energy_scale");
        b.T = as_int(need(j, "T", "bundle"), "T");
        b.T_prime = as_int(need(j, "T_prime", "bundle"), "T_prime");
        if (j.contains("solve_status")) b.solve_status = j["solve_status"].get<std::string>();
        if (j.contains("runtime_seconds")) b.runtime_seconds = j["runtime_seconds"].get<double>();
        for (const auto& c : need(j, "recharger_starts", "bundle"))
            b.recharger_starts.push_back(as_cell(c, "recharger_starts"));
        const auto& ws = need(j, "workers", "bundle");
        for (std::size_t i = 0; i < ws.size(); ++i)
            b.workers.push_back(plan_from(ws[i], "workers[" + std::to_string(i) + "]"));
        const auto& rs = need(j, "rechargers", "bundle");
        for (std::size_t i = 0; i < rs.size(); ++i)
            b.rechargers.push_back(plan_from(rs[i], "rechargers[" + std::to_string(i) + "]"));
        const auto& ev = need(j, "recharge_events", "bundle");
        for (std::size_t k = 0; k < ev.size(); ++k) {
            const std::string f = "recharge_events[" + std::to_string(k) + "]";
            RechargeEvent e;
            e.step = as_int(need(ev[k], "step", f), f + ".step");
            e.worker = as_int(need(ev[k], "worker", f), f + ".worker");
            e.recharger = as_int(need(ev[k], "recharger", f), f + ".recharger");
            e.delta = need(ev[k], "delta", f).get<Energy>();
            e.cell = as_cell(need(ev[k], "cell", f), f + ".cell");
            e.recharger_cell = as_cell(need(ev[k], "recharger_cell", f), f + ".recharger_cell");
            b.events.push_back(e);
        }
    } catch (const nlohmann::json::type_error& e) {
        throw ParseError(std::string("bundle JSON: ") + e.what());
    }
    return b;
}

void save_bundle(const PlanBundle& b, const std::filesystem::path& path) {
    write_text_file(path, bundle_to_json(b));
}

PlanBundle load_bundle(const std::filesystem::path& path) {
    return bundle_from_json(read_text_file(path));
}

}  // namespace mrp
