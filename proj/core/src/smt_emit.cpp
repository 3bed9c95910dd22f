#include <cctype>
#include <string>

#include "mrp/error.hpp"
#include "mrp/smt.hpp"

namespace mrp::smt {

Dialect z3_dialect() { return {}; }

Dialect portable_dialect() { return {false, false, false, false}; }

namespace {

bool plain_symbol(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '!'))
            return false;
    return true;
}

std::string int_literal(std::int64_t v) {
    if (v < 0) return "(- " + std::to_string(-v) + ")";
    return std::to_string(v);
}

class Emitter {
public:
    Emitter(const Program& p, const Dialect& d, std::string& out) : p_(p), d_(d), out_(out) {}

    void term(Term t) {
        const Node& n = p_.node(t);
        switch (n.op) {
            case Op::BoolConst:
                out_ += n.value ? "true" : "false";
                return;
            case Op::IntConst:
                out_ += int_literal(n.value);
                return;
            case Op::Var:
                out_ += symbol(p_.vars()[static_cast<std::size_t>(n.value)].name);
                return;
            case Op::Not: return app("not", n.args);
            case Op::And: return app("and", n.args);
            case Op::Or: return app("or", n.args);
            case Op::Implies: return app("=>", n.args);
            case Op::Iff:
            case Op::Eq: return app("=", n.args);
            case Op::Le: return app("<=", n.args);
            case Op::Lt: return app("<", n.args);
            case Op::Add: return app("+", n.args);
            case Op::Ite: return app("ite", n.args);
            case Op::Mul:
                out_ += "(* " + int_literal(n.value) + " ";
                term(n.args[0]);
                out_ += ")";
                return;
            case Op::AtMost:
            case Op::AtLeast:
            case Op::Exactly:
                return cardinality(n);
        }
        throw EncodingError("unsupported term shape");
    }

    static std::string symbol(const std::string& name) {
        if (plain_symbol(name)) return name;
        if (name.find('|') != std::string::npos || name.find('\\') != std::string::npos)
            throw EncodingError("variable name cannot be quoted: " + name);
        return "|" + name + "|";
    }

private:
    void app(const char* f, const std::vector<Term>& args) {
        out_ += '(';
        out_ += f;
        for (Term a : args) {
            out_ += ' ';
            term(a);
        }
        out_ += ')';
    }

    void cardinality(const Node& n) {
        const std::string k = std::to_string(n.value);
        if (d_.pseudo_boolean) {
            if (n.op == Op::AtMost) out_ += "((_ at-most " + k + ")";
            else if (n.op == Op::AtLeast) out_ += "((_ at-least " + k + ")";
            else {
                out_ += "((_ pbeq " + k;
                for (std::size_t i = 0; i < n.args.size(); ++i) out_ += " 1";
                out_ += ")";
            }
            for (Term a : n.args) {
                out_ += ' ';
                term(a);
            }
            out_ += ')';
            return;
        }
        out_ += n.op == Op::AtMost ? "(<= (+" : n.op == Op::AtLeast ? "(>= (+" : "(= (+";
        for (Term a : n.args) {
            out_ += " (ite ";
            term(a);
            out_ += " 1 0)";
        }
        if (n.args.size() == 1) out_ += " 0";
        out_ += ") " + k + ")";
    }

    const Program& p_;
    const Dialect& d_;
    std::string& out_;
};

}  // namespace

std::string emit_smtlib(const Program& p, const EmitOptions& opts) {
    const Dialect& d = opts.dialect;
    if (!d.native_lexicographic && p.objectives().size() > 1)
        throw EncodingError("dialect has no native lexicographic optimization; solve objectives one at a time");
    std::string out;
    out.reserve(64 * (p.vars().size() + p.assertions().size()) + 256);
    Emitter em(p, d, out);
    out += "(set-option :produce-models true)\n";
    if (opts.timeout_ms && d.timeout_option) out += "(set-option :timeout " + std::to_string(*opts.timeout_ms) + ")\n";
    if (opts.seed && d.random_seed_option) {
        out += "(set-option :smt.random_seed " + std::to_string(*opts.seed) + ")\n";
        out += "(set-option :sat.random_seed " + std::to_string(*opts.seed) + ")\n";
    }
    for (const auto& v : p.vars())
        out += "(declare-fun " + Emitter::symbol(v.name) + " () " +
               (v.sort == Sort::Bool ? "Bool" : "Int") + ")\n";
    for (const auto& v : p.vars()) {
        if (v.sort != Sort::Int) continue;
        const auto sym = Emitter::symbol(v.name);
        out += "(assert (and (<= " + int_literal(*v.lo) + " " + sym + ") (<= " + sym + " " +
               int_literal(*v.hi) + ")))\n";
    }
    for (Term a : p.assertions()) {
        out += "(assert ";
        em.term(a);
        out += ")\n";
    }
    for (const auto& o : p.objectives()) {
        out += "(minimize ";
        em.term(o.term);
        out += ")\n";
    }
    out += "(check-sat)\n";
    if (opts.get_values && !p.vars().empty()) {
        out += "(get-value (";
        for (std::size_t i = 0; i < p.vars().size(); ++i) {
            if (i) out += ' ';
            out += Emitter::symbol(p.vars()[i].name);
        }
        out += "))\n";
    }
    out += "(exit)\n";
    return out;
}

}  // namespace mrp::smt
