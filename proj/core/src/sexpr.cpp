#include <cctype>

#include "mrp/error.hpp"
#include "mrp/smt.hpp"

namespace mrp::smt {

std::vector<SExpr> parse_sexprs(std::string_view text) {
    std::vector<SExpr> top;
    std::vector<SExpr> stack;  // open lists
    std::size_t i = 0;
    auto emit = [&](SExpr e) {
        if (stack.empty())
            top.push_back(std::move(e));
        else
            stack.back().list.push_back(std::move(e));
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == ';') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (c == '(') {
            stack.emplace_back();
            ++i;
        } else if (c == ')') {
            if (stack.empty()) throw ParseError("unbalanced ')' at offset " + std::to_string(i));
            SExpr done = std::move(stack.back());
            stack.pop_back();
            emit(std::move(done));
            ++i;
        } else if (c == '"') {
            // String literal; "" escapes a quote.
            std::string s = "\"";
            ++i;
            for (;;) {
                if (i >= text.size()) throw ParseError("unterminated string literal");
                if (text[i] == '"') {
                    if (i + 1 < text.size() && text[i + 1] == '"') {
                        s += "\"\"";
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                s += text[i++];
            }
            s += '"';
            emit(SExpr{s, {}});
        } else if (c == '|') {
            const auto end = text.find('|', i + 1);
            if (end == std::string_view::npos) throw ParseError("unterminated quoted symbol");
            emit(SExpr{std::string(text.substr(i + 1, end - i - 1)), {}});
            i = end + 1;
        } else {
            const auto start = i;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) &&
                   text[i] != '(' && text[i] != ')' && text[i] != '"' && text[i] != ';')
                ++i;
            emit(SExpr{std::string(text.substr(start, i - start)), {}});
        }
    }
    if (!stack.empty()) throw ParseError("unbalanced '(' in solver output");
    return top;
}

}  // namespace mrp::smt
