#include <filesystem>

#include "doctest.h"
#include "mrp/error.hpp"
#include "mrp/oneshot.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/smt.hpp"

using namespace mrp;
using namespace mrp::smt;

namespace {

SolverConfig cfg(double seconds = 60) {
    auto c = default_solver_config();
    c.timeout_seconds = seconds;
    return c;
}

std::int64_t value_of(const Program& p, const SolveOutcome& o, const std::string& name) {
    return evaluate(p, *o.model, *p.find_var(name));
}

}  // namespace

TEST_CASE("forced optimum") {
    Program p;
    const Term x = p.int_var("x", -100, 100);
    p.require(p.ge(x, p.constant(3)));
    p.minimize(x, "x");
    const auto o = solve(p, cfg());
    CHECK(o.status == Status::Optimal);
    REQUIRE(o.has_model());
    CHECK(value_of(p, o, "x") == 3);
    CHECK(o.objective_values == std::vector<std::int64_t>{3});
}

TEST_CASE("unsatisfiable pair") {
    Program p;
    const Term x = p.int_var("x", -100, 100);
    p.require(p.ge(x, p.constant(3)));
    p.require(p.le(x, p.constant(1)));
    p.minimize(x, "x");
    const auto o = solve(p, cfg());
    CHECK(o.status == Status::Unsatisfiable);
    CHECK_FALSE(o.has_model());
}

TEST_CASE("lexicographic objectives, native and two-pass") {
    auto build = [] {
        Program p;
        const Term x = p.int_var("x", 0, 100), y = p.int_var("y", 0, 100);
        p.require(p.ge(p.add({x, y}), p.constant(4)));
        p.require(p.ge(x, p.constant(1)));
        p.require(p.ge(y, p.constant(1)));
        p.minimize(x, "x");
        p.minimize(y, "y");
        return p;
    };
    for (bool native : {true, false}) {
        CAPTURE(native);
        const auto p = build();
        auto c = cfg();
        Dialect d = z3_dialect();
        d.native_lexicographic = native;
        c.dialect = d;
        const auto o = solve(p, c);
        CHECK(o.status == Status::Optimal);
        CHECK(value_of(p, o, "x") == 1);
        CHECK(value_of(p, o, "y") == 3);
        CHECK(o.objective_values == std::vector<std::int64_t>{1, 3});
    }
}

TEST_CASE("portable dialect expands cardinality constraints") {
    Program p;
    std::vector<Term> b;
    for (int k = 0; k < 5; ++k) b.push_back(p.bool_var("b" + std::to_string(k)));
    p.require(p.exactly(b, 2));
    p.minimize(p.count(b), "n");
    EmitOptions eo;
    eo.dialect = portable_dialect();
    const auto text = emit_smtlib(p, eo);
    CHECK(text.find("_ at-most") == std::string::npos);
    CHECK(text.find("pbeq") == std::string::npos);
    auto c = cfg();
    c.dialect = portable_dialect();
    const auto o = solve(p, c);
    CHECK(o.status == Status::Optimal);
    CHECK(o.objective_values == std::vector<std::int64_t>{2});
}

TEST_CASE("emit_smtlib is a pure function of the program") {
    const auto s = tiny_fixture();
    const auto a = emit_smtlib(encode_oneshot(s));
    const auto b = emit_smtlib(encode_oneshot(s));
    CHECK(a == b);
    CHECK(a.find("(check-sat)") != std::string::npos);
    CHECK(a.find("(minimize") != std::string::npos);
}

TEST_CASE("re-solving yields the same objective values") {
    const auto s = tiny_fixture();
    const auto p = encode_oneshot(s);
    const auto o1 = solve(p, cfg());
    const auto o2 = solve(p, cfg());
    REQUIRE(o1.status == Status::Optimal);
    CHECK(o1.objective_values == o2.objective_values);
}

TEST_CASE("constant folding") {
    Program p;
    const Term x = p.bool_var("x");
    CHECK(p.is_true(p.or_({x, p.truth()})));
    CHECK(p.is_false(p.and_({x, p.falsity()})));
    CHECK(p.and_({x, p.truth()}) == x);
    CHECK(p.is_true(p.implies(p.falsity(), x)));
}

TEST_CASE("evaluate") {
    Program p;
    const Term x = p.int_var("x", 0, 9), b = p.bool_var("b");
    Model m;
    m.values = {4, 1};
    m.present = {true, true};
    CHECK(evaluate(p, m, p.add({x, p.constant(3)})) == 7);
    CHECK(evaluate(p, m, p.ite(b, p.mul(2, x), p.constant(0))) == 8);
    CHECK(evaluate(p, m, p.at_most(std::vector<Term>{b, b}, 1)) == 0);
    Model partial;
    partial.values = {4, 0};
    partial.present = {true, false};
    CHECK_THROWS_AS(evaluate(p, partial, b), EncodingError);
}

TEST_CASE("s-expression parsing") {
    const auto xs = parse_sexprs("sat (objectives (x 3)) ((x 3) (y (- 2)))");
    REQUIRE(xs.size() == 3);
    CHECK(xs[0].atom == "sat");
    CHECK(xs[1].list.size() == 2);
    CHECK(xs[2].list[1].list[1].list[0].atom == "-");
    CHECK_THROWS_AS(parse_sexprs("(a (b)"), ParseError);
}

TEST_CASE("solver output interpretation") {
    Program p;
    const Term x = p.int_var("x", -10, 10);
    p.require(p.ge(x, p.constant(-2)));
    p.minimize(x, "x");
    const auto o = parse_solver_output(p, "sat\n(objectives\n (x (- 2))\n)\n((x (- 2)))\n", true);
    CHECK(o.status == Status::Optimal);
    CHECK(evaluate(p, *o.model, x) == -2);
    CHECK(parse_solver_output(p, "unsat\n", true).status == Status::Unsatisfiable);
    CHECK_THROWS_AS(parse_solver_output(p, "garbage output\n", true), BridgeError);
}

TEST_CASE("missing solver executable is a bridge error") {
    Program p;
    p.require(p.bool_var("b"));
    SolverConfig c = cfg();
    c.command = {"/nonexistent/solver-binary"};
    CHECK_THROWS_AS(solve(p, c), BridgeError);
}

TEST_CASE("a solver that exceeds its budget reports timeout") {
    Program p;
    p.require(p.bool_var("b"));
    SolverConfig c = cfg(0.5);
    c.command = {"sh", "-c", "sleep 60"};
    c.dialect = portable_dialect();
    const auto o = solve(p, c);
    CHECK(o.status == Status::Timeout);
    CHECK_FALSE(o.has_model());
}

TEST_CASE("dump path receives the emitted text") {
    Program p;
    const Term x = p.int_var("x", 0, 5);
    p.minimize(x, "x");
    auto c = cfg();
    const auto path = std::filesystem::temp_directory_path() / "mrp_test_smt" / "nested" / "dump.smt2";
    std::filesystem::remove_all(path.parent_path());
    c.dump_path = path.string();
    solve(p, c);
    CHECK(std::filesystem::exists(path));
}
