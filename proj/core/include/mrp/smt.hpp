#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mrp::smt {

enum class Sort : std::uint8_t { Bool, Int };

// Handle into a Program's term table.
struct Term {
    std::uint32_t id = 0;
    friend constexpr bool operator==(Term, Term) = default;
};

enum class Op : std::uint8_t {
    BoolConst,
    IntConst,
    Var,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Eq,  // integer equality
    Le,
    Lt,
    Add,
    Mul,  // constant * term, constant in `value`
    Ite,
    AtMost,   // cardinality over Bool args, bound in `value`
    AtLeast,
    Exactly,
};

struct Node {
    Op op;
    Sort sort;
    std::int64_t value = 0;  // constant, variable index, or cardinality bound
    std::vector<Term> args;
};

struct VarDecl {
    std::string name;
    Sort sort;
    std::optional<std::int64_t> lo, hi;  // inclusive bounds for Int vars
};

struct Objective {
    std::string label;
    Term term;  // minimized
};

// Solver-neutral constraint program: variables, assertions and an ordered
// list of minimization objectives (lexicographic in list order).
// Constructors fold constants, so pruned literals can be passed as false().
class Program {
public:
    Program();

    Term bool_var(std::string name);
    Term int_var(std::string name, std::int64_t lo, std::int64_t hi);

    Term truth() const { return true_; }
    Term falsity() const { return false_; }
    Term boolean(bool b) const { return b ? true_ : false_; }
    Term constant(std::int64_t v);

    Term not_(Term a);
    Term and_(std::span<const Term> xs);
    Term or_(std::span<const Term> xs);
    Term and_(std::initializer_list<Term> xs) { return and_(std::span<const Term>(xs.begin(), xs.size())); }
    Term or_(std::initializer_list<Term> xs) { return or_(std::span<const Term>(xs.begin(), xs.size())); }
    Term implies(Term a, Term b);
    Term iff(Term a, Term b);
    Term eq(Term a, Term b);
    Term le(Term a, Term b);
    Term lt(Term a, Term b);
    Term ge(Term a, Term b) { return le(b, a); }
    Term gt(Term a, Term b) { return lt(b, a); }
    Term add(std::span<const Term> xs);
    Term add(std::initializer_list<Term> xs) { return add(std::span<const Term>(xs.begin(), xs.size())); }
    Term sub(Term a, Term b);
    Term mul(std::int64_t k, Term a);
    Term ite(Term c, Term a, Term b);
    Term at_most(std::span<const Term> xs, std::int64_t k);
    Term at_least(std::span<const Term> xs, std::int64_t k);
    Term exactly(std::span<const Term> xs, std::int64_t k);
    // Sum of Bool terms as an Int (ite(x,1,0) summed).
    Term count(std::span<const Term> xs);

    void require(Term t);
    void minimize(Term t, std::string label);

    const Node& node(Term t) const { return nodes_[t.id]; }
    const std::vector<VarDecl>& vars() const noexcept { return vars_; }
    const std::vector<Term>& assertions() const noexcept { return assertions_; }
    const std::vector<Objective>& objectives() const noexcept { return objectives_; }
    Term var_term(std::size_t index) const { return var_terms_[index]; }
    std::optional<Term> find_var(const std::string& name) const;

    bool is_true(Term t) const { return t == true_; }
    bool is_false(Term t) const { return t == false_; }
    bool is_const(Term t) const;

    // Program with the objectives replaced (used by two-pass lexicographic solving).
    Program with_objectives(std::vector<Objective> objs) const;

private:
    Term push(Node n);
    Sort sort_of(Term t) const { return nodes_[t.id].sort; }
    void want(Term t, Sort s, const char* where) const;
    Term card(Op op, std::span<const Term> xs, std::int64_t k);

    std::vector<Node> nodes_;
    std::vector<VarDecl> vars_;
    std::vector<Term> var_terms_;
    std::map<std::string, std::size_t> var_index_;
    std::map<std::int64_t, Term> int_consts_;
    std::vector<Term> assertions_;
    std::vector<Objective> objectives_;
    Term true_, false_;
};

// Values of variables by index.
struct Model {
    std::vector<std::int64_t> values;  // Bool vars hold 0/1
    std::vector<bool> present;

    bool has(std::size_t var) const { return var < present.size() && present[var]; }
};

// Evaluates a term under a model. Throws EncodingError when a variable is missing.
std::int64_t evaluate(const Program& p, const Model& m, Term t);

struct Dialect {
    bool pseudo_boolean = true;    // ((_ at-most k) ...) / ((_ pbeq ...)) cardinalities
    bool native_lexicographic = true;  // several (minimize) commands solved in order
    bool timeout_option = true;    // (set-option :timeout ms)
    bool random_seed_option = true;  // (set-option :random_seed n)
};

Dialect z3_dialect();
Dialect portable_dialect();

struct EmitOptions {
    Dialect dialect = z3_dialect();
    std::optional<std::int64_t> timeout_ms;
    std::optional<std::uint64_t> seed;
    bool get_values = true;
};

// Deterministic SMT-LIB 2 text for the program. Throws EncodingError on a
// term shape the dialect cannot express.
std::string emit_smtlib(const Program& p, const EmitOptions& opts = {});

enum class Status { Optimal, Satisfiable, Unsatisfiable, Timeout };
std::string to_string(Status s);

struct SolveOutcome {
    Status status = Status::Timeout;
    std::optional<Model> model;          // present iff status is Optimal or Satisfiable
    std::vector<std::int64_t> objective_values;  // aligned with Program::objectives()
    double wall_seconds = 0.0;

    bool has_model() const { return model.has_value(); }
};

struct SolverConfig {
    // argv of the solver process; SMT-LIB is written to its stdin.
    std::vector<std::string> command;
    double timeout_seconds = 10800.0;
    std::optional<std::uint64_t> seed;
    std::optional<Dialect> dialect;  // default: derived from the command name
    std::string dump_path;           // when non-empty, emitted text is written here
    // Replace (minimize) by repeated check-sat queries that bisect each
    // objective between its proven floor and the best model so far.
    bool descent = false;
};

// "z3 -in", or the MRP_SOLVER environment variable as the executable.
SolverConfig default_solver_config();
Dialect dialect_for(const SolverConfig& cfg);

// Runs the solver. Lexicographic objectives fall back to one pass per
// objective when the dialect lacks native support. Throws BridgeError when
// the process fails or its output cannot be understood.
SolveOutcome solve(const Program& p, const SolverConfig& cfg);

// --- lower-level pieces, exposed for testing --------------------------------

struct SExpr {
    std::string atom;  // empty for lists
    std::vector<SExpr> list;
    bool is_atom() const { return !atom.empty(); }
};

// Parses a sequence of s-expressions. Throws ParseError.
std::vector<SExpr> parse_sexprs(std::string_view text);

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    bool signalled = false;
    std::string out;
    std::string err;
};

// Runs argv with `input` on stdin and collects output, killing the process
// after `timeout`. Throws BridgeError when the process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv, const std::string& input,
                          std::chrono::milliseconds timeout);

// Interprets raw solver output for program p.
SolveOutcome parse_solver_output(const Program& p, const std::string& out, bool objectives_complete);

}  // namespace mrp::smt
