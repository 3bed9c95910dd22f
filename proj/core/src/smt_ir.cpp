#include <algorithm>

#include "mrp/error.hpp"
#include "mrp/smt.hpp"

namespace mrp::smt {

Program::Program() {
    true_ = push({Op::BoolConst, Sort::Bool, 1, {}});
    false_ = push({Op::BoolConst, Sort::Bool, 0, {}});
}

Term Program::push(Node n) {
    nodes_.push_back(std::move(n));
    return Term{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

void Program::want(Term t, Sort s, const char* where) const {
    if (t.id >= nodes_.size()) throw EncodingError(std::string(where) + ": dangling term");
    if (sort_of(t) != s)
        throw EncodingError(std::string(where) + ": expected " +
                            (s == Sort::Bool ? "a Bool" : "an Int") + " argument");
}

bool Program::is_const(Term t) const {
    auto op = nodes_[t.id].op;
    return op == Op::BoolConst || op == Op::IntConst;
}

Term Program::bool_var(std::string name) {
    if (var_index_.count(name)) throw EncodingError("duplicate variable " + name);
    const auto idx = vars_.size();
    var_index_[name] = idx;
    vars_.push_back({std::move(name), Sort::Bool, std::nullopt, std::nullopt});
    Term t = push({Op::Var, Sort::Bool, static_cast<std::int64_t>(idx), {}});
    var_terms_.push_back(t);
    return t;
}

Term Program::int_var(std::string name, std::int64_t lo, std::int64_t hi) {
    if (var_index_.count(name)) throw EncodingError("duplicate variable " + name);
    if (lo > hi) throw EncodingError("empty range for " + name);
    const auto idx = vars_.size();
    var_index_[name] = idx;
    vars_.push_back({std::move(name), Sort::Int, lo, hi});
    Term t = push({Op::Var, Sort::Int, static_cast<std::int64_t>(idx), {}});
    var_terms_.push_back(t);
    return t;
}

std::optional<Term> Program::find_var(const std::string& name) const {
    auto it = var_index_.find(name);
    if (it == var_index_.end()) return std::nullopt;
    return var_terms_[it->second];
}

Term Program::constant(std::int64_t v) {
    auto it = int_consts_.find(v);
    if (it != int_consts_.end()) return it->second;
    Term t = push({Op::IntConst, Sort::Int, v, {}});
    int_consts_[v] = t;
    return t;
}

Term Program::not_(Term a) {
    want(a, Sort::Bool, "not");
    if (a == true_) return false_;
    if (a == false_) return true_;
    if (nodes_[a.id].op == Op::Not) return nodes_[a.id].args[0];
    return push({Op::Not, Sort::Bool, 0, {a}});
}

Term Program::and_(std::span<const Term> xs) {
    std::vector<Term> args;
    for (Term x : xs) {
        want(x, Sort::Bool, "and");
        if (x == false_) return false_;
        if (x == true_) continue;
        if (std::find(args.begin(), args.end(), x) == args.end()) args.push_back(x);
    }
    if (args.empty()) return true_;
    if (args.size() == 1) return args[0];
    return push({Op::And, Sort::Bool, 0, std::move(args)});
}

Term Program::or_(std::span<const Term> xs) {
    std::vector<Term> args;
    for (Term x : xs) {
        want(x, Sort::Bool, "or");
        if (x == true_) return true_;
        if (x == false_) continue;
        if (std::find(args.begin(), args.end(), x) == args.end()) args.push_back(x);
    }
    if (args.empty()) return false_;
    if (args.size() == 1) return args[0];
    return push({Op::Or, Sort::Bool, 0, std::move(args)});
}

Term Program::implies(Term a, Term b) {
    want(a, Sort::Bool, "implies");
    want(b, Sort::Bool, "implies");
    if (a == false_ || b == true_) return true_;
    if (a == true_) return b;
    if (b == false_) return not_(a);
    return push({Op::Implies, Sort::Bool, 0, {a, b}});
}

Term Program::iff(Term a, Term b) {
    want(a, Sort::Bool, "iff");
    want(b, Sort::Bool, "iff");
    if (a == b) return true_;
    if (a == true_) return b;
    if (b == true_) return a;
    if (a == false_) return not_(b);
    if (b == false_) return not_(a);
    return push({Op::Iff, Sort::Bool, 0, {a, b}});
}

Term Program::eq(Term a, Term b) {
    want(a, Sort::Int, "=");
    want(b, Sort::Int, "=");
    if (a == b) return true_;
    if (is_const(a) && is_const(b)) return boolean(nodes_[a.id].value == nodes_[b.id].value);
    return push({Op::Eq, Sort::Bool, 0, {a, b}});
}

Term Program::le(Term a, Term b) {
    want(a, Sort::Int, "<=");
    want(b, Sort::Int, "<=");
    if (a == b) return true_;
    if (is_const(a) && is_const(b)) return boolean(nodes_[a.id].value <= nodes_[b.id].value);
    return push({Op::Le, Sort::Bool, 0, {a, b}});
}

Term Program::lt(Term a, Term b) {
    want(a, Sort::Int, "<");
    want(b, Sort::Int, "<");
    if (a == b) return false_;
    if (is_const(a) && is_const(b)) return boolean(nodes_[a.id].value < nodes_[b.id].value);
    return push({Op::Lt, Sort::Bool, 0, {a, b}});
}

Term Program::add(std::span<const Term> xs) {
    std::vector<Term> args;
    std::int64_t k = 0;
    for (Term x : xs) {
        want(x, Sort::Int, "+");
        if (nodes_[x.id].op == Op::IntConst)
            k += nodes_[x.id].value;
        else
            args.push_back(x);
    }
    if (k != 0 || args.empty()) args.push_back(constant(k));
    if (args.size() == 1) return args[0];
    return push({Op::Add, Sort::Int, 0, std::move(args)});
}

Term Program::sub(Term a, Term b) { return add({a, mul(-1, b)}); }

Term Program::mul(std::int64_t k, Term a) {
    want(a, Sort::Int, "*");
    if (k == 0) return constant(0);
    if (k == 1) return a;
    if (nodes_[a.id].op == Op::IntConst) return constant(k * nodes_[a.id].value);
    return push({Op::Mul, Sort::Int, k, {a}});
}

Term Program::ite(Term c, Term a, Term b) {
    want(c, Sort::Bool, "ite");
    if (sort_of(a) != sort_of(b)) throw EncodingError("ite: branch sorts differ");
    if (c == true_ || a == b) return a;
    if (c == false_) return b;
    return push({Op::Ite, sort_of(a), 0, {c, a, b}});
}

Term Program::card(Op op, std::span<const Term> xs, std::int64_t k) {
    std::vector<Term> args;
    for (Term x : xs) {
        want(x, Sort::Bool, "cardinality");
        if (x == false_) continue;
        if (x == true_) {
            --k;
            continue;
        }
        args.push_back(x);
    }
    const auto n = static_cast<std::int64_t>(args.size());
    std::vector<Term> negs;
    switch (op) {
        case Op::AtMost:
            if (k < 0) return false_;
            if (n <= k) return true_;
            if (k == 0) {
                for (Term a : args) negs.push_back(not_(a));
                return and_(negs);
            }
            break;
        case Op::AtLeast:
            if (k <= 0) return true_;
            if (n < k) return false_;
            if (k == 1) return or_(args);
            if (n == k) return and_(args);
            break;
        case Op::Exactly:
            if (k < 0 || k > n) return false_;
            if (n == k) return and_(args);
            if (k == 0) {
                for (Term a : args) negs.push_back(not_(a));
                return and_(negs);
            }
            break;
        default:
            throw EncodingError("not a cardinality operator");
    }
    return push({op, Sort::Bool, k, std::move(args)});
}

Term Program::at_most(std::span<const Term> xs, std::int64_t k) { return card(Op::AtMost, xs, k); }
Term Program::at_least(std::span<const Term> xs, std::int64_t k) { return card(Op::AtLeast, xs, k); }
Term Program::exactly(std::span<const Term> xs, std::int64_t k) { return card(Op::Exactly, xs, k); }

Term Program::count(std::span<const Term> xs) {
    std::vector<Term> parts;
    parts.reserve(xs.size());
    const Term one = constant(1), zero = constant(0);
    for (Term x : xs) parts.push_back(ite(x, one, zero));
    return add(parts);
}

void Program::require(Term t) {
    want(t, Sort::Bool, "assert");
    if (t == true_) return;
    assertions_.push_back(t);
}

void Program::minimize(Term t, std::string label) {
    want(t, Sort::Int, "minimize");
    objectives_.push_back({std::move(label), t});
}

Program Program::with_objectives(std::vector<Objective> objs) const {
    Program copy = *this;
    copy.objectives_ = std::move(objs);
    return copy;
}

std::int64_t evaluate(const Program& p, const Model& m, Term t) {
    const Node& n = p.node(t);
    auto ev = [&](std::size_t i) { return evaluate(p, m, n.args[i]); };
    switch (n.op) {
        case Op::BoolConst:
        case Op::IntConst:
            return n.value;
        case Op::Var: {
            const auto idx = static_cast<std::size_t>(n.value);
            if (!m.has(idx)) throw EncodingError("model lacks a value for " + p.vars()[idx].name);
            return m.values[idx];
        }
        case Op::Not:
            return ev(0) ? 0 : 1;
        case Op::And:
            for (std::size_t i = 0; i < n.args.size(); ++i)
                if (!ev(i)) return 0;
            return 1;
        case Op::Or:
            for (std::size_t i = 0; i < n.args.size(); ++i)
                if (ev(i)) return 1;
            return 0;
        case Op::Implies:
            return (!ev(0) || ev(1)) ? 1 : 0;
        case Op::Iff:
            return ((ev(0) != 0) == (ev(1) != 0)) ? 1 : 0;
        case Op::Eq:
            return ev(0) == ev(1) ? 1 : 0;
        case Op::Le:
            return ev(0) <= ev(1) ? 1 : 0;
        case Op::Lt:
            return ev(0) < ev(1) ? 1 : 0;
        case Op::Add: {
            std::int64_t s = 0;
            for (std::size_t i = 0; i < n.args.size(); ++i) s += ev(i);
            return s;
        }
        case Op::Mul:
            return n.value * ev(0);
        case Op::Ite:
            return ev(0) ? ev(1) : ev(2);
        case Op::AtMost:
        case Op::AtLeast:
        case Op::Exactly: {
            std::int64_t c = 0;
            for (std::size_t i = 0; i < n.args.size(); ++i) c += ev(i) ? 1 : 0;
            if (n.op == Op::AtMost) return c <= n.value;
            if (n.op == Op::AtLeast) return c >= n.value;
            return c == n.value;
        }
    }
    throw EncodingError("unknown operator");
}

}  // namespace mrp::smt
