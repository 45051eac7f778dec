#include "weilkit/parse.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace weilkit {

namespace {

enum class Tok { Number, Ident, Symbol, Arrow, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(const std::string &s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (std::isdigit(c)) {
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            if (i + 1 < s.size() && s[i] == '.' && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
                ++i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                    ++i;
            }
            out.push_back({Tok::Number, s.substr(start, i - start), start});
        } else if (std::isalpha(c) || c == '_') {
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                ++i;
            out.push_back({Tok::Ident, s.substr(start, i - start), start});
        } else if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            i += 2;
            out.push_back({Tok::Arrow, "->", start});
        } else if (std::string("+-*/^(),").find(static_cast<char>(c)) != std::string::npos) {
            ++i;
            out.push_back({Tok::Symbol, std::string(1, static_cast<char>(c)), start});
        } else {
            throw ParseError("unexpected character '" + std::string(1, static_cast<char>(c)) +
                             "' at offset " + std::to_string(start));
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

const std::set<std::string> &function_names() {
    static const std::set<std::string> names{"exp", "log", "sin", "cos", "sqrt"};
    return names;
}

Op function_op(const std::string &name) {
    if (name == "exp") return Op::Exp;
    if (name == "log") return Op::Log;
    if (name == "sin") return Op::Sin;
    if (name == "cos") return Op::Cos;
    return Op::Sqrt;
}

class Parser {
public:
    Parser(std::vector<Token> toks, std::vector<std::string> vars)
        : toks_(std::move(toks)), vars_(std::move(vars)) {}

    const Token &peek() const { return toks_[pos_]; }
    bool at_symbol(const std::string &s) const { return peek().kind == Tok::Symbol && peek().text == s; }
    bool accept_symbol(const std::string &s) {
        if (!at_symbol(s))
            return false;
        ++pos_;
        return true;
    }
    void expect_symbol(const std::string &s) {
        if (!accept_symbol(s))
            fail("expected '" + s + "'");
    }
    [[noreturn]] void fail(const std::string &msg) const {
        const Token &t = peek();
        std::string where = t.kind == Tok::End ? "end of input" : "token '" + t.text + "'";
        throw ParseError(msg + " at " + where + " (offset " + std::to_string(t.pos) + ")");
    }
    std::string ident() {
        if (peek().kind != Tok::Ident)
            fail("expected a name");
        return toks_[pos_++].text;
    }
    void expect_arrow() {
        if (peek().kind != Tok::Arrow)
            fail("expected '->'");
        ++pos_;
    }
    bool at_end() const { return peek().kind == Tok::End; }
    std::size_t position() const { return pos_; }
    void rewind(std::size_t p) { pos_ = p; }
    void set_variables(std::vector<std::string> v) { vars_ = std::move(v); }

    Expr expr() {
        Expr acc = term();
        for (;;) {
            if (accept_symbol("+"))
                acc = acc + term();
            else if (accept_symbol("-"))
                acc = acc - term();
            else
                return acc;
        }
    }

private:
    Expr term() {
        Expr acc = unary();
        for (;;) {
            if (accept_symbol("*"))
                acc = acc * unary();
            else if (accept_symbol("/"))
                acc = acc / unary();
            else
                return acc;
        }
    }

    Expr unary() {
        if (accept_symbol("-"))
            return -unary();
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (!accept_symbol("^"))
            return base;
        bool paren = accept_symbol("(");
        bool negative = accept_symbol("-");
        if (peek().kind != Tok::Number || peek().text.find('.') != std::string::npos)
            fail("expected an integer exponent");
        long e = std::stol(toks_[pos_++].text);
        if (paren)
            expect_symbol(")");
        return Expr::pow(base, negative ? -e : e);
    }

    Expr primary() {
        const Token &t = peek();
        if (t.kind == Tok::Number) {
            ++pos_;
            return Expr::constant(parse_rational(t.text));
        }
        if (t.kind == Tok::Ident) {
            std::string name = t.text;
            ++pos_;
            if (function_names().count(name)) {
                expect_symbol("(");
                Expr arg = expr();
                expect_symbol(")");
                return Expr::apply(function_op(name), arg);
            }
            auto it = std::find(vars_.begin(), vars_.end(), name);
            if (it == vars_.end()) {
                --pos_;
                fail("unknown variable '" + name + "'");
            }
            return Expr::variable(static_cast<std::size_t>(it - vars_.begin()));
        }
        if (accept_symbol("(")) {
            Expr e = expr();
            expect_symbol(")");
            return e;
        }
        fail("expected a number, variable, function or '('");
    }

    std::vector<Token> toks_;
    std::vector<std::string> vars_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse_expression(const std::string &text, const std::vector<std::string> &variables) {
    Parser p(tokenize(text), variables);
    Expr e = p.expr();
    if (!p.at_end())
        p.fail("unexpected trailing input");
    return e;
}

Expr parse_expression(const std::string &text, std::vector<std::string> &variables_out) {
    auto toks = tokenize(text);
    std::set<std::string> names;
    for (const auto &t : toks)
        if (t.kind == Tok::Ident && !function_names().count(t.text))
            names.insert(t.text);
    variables_out.assign(names.begin(), names.end());
    return parse_expression(text, static_cast<const std::vector<std::string> &>(variables_out));
}

SmoothMap parse_map(const std::string &text, const std::string &keyword) {
    Parser p(tokenize(text), {});
    std::string kw = p.ident();
    if (kw != keyword)
        throw ParseError("expected keyword '" + keyword + "' but found '" + kw + "'");
    std::string name = p.ident();
    p.expect_symbol("(");
    std::vector<std::string> vars;
    if (!p.accept_symbol(")")) {
        do {
            std::string v = p.ident();
            if (function_names().count(v))
                throw ParseError("'" + v + "' is a function name and cannot be a variable");
            vars.push_back(v);
        } while (p.accept_symbol(","));
        p.expect_symbol(")");
    }
    std::set<std::string> unique(vars.begin(), vars.end());
    if (unique.size() != vars.size())
        throw ParseError("map '" + name + "' repeats a variable name");
    p.expect_arrow();
    p.set_variables(vars);

    std::vector<Expr> outputs;
    std::size_t mark = p.position();
    bool tuple_ok = false;
    if (p.accept_symbol("(")) {
        try {
            do {
                outputs.push_back(p.expr());
            } while (p.accept_symbol(","));
            p.expect_symbol(")");
            tuple_ok = p.at_end();
        } catch (const ParseError &) {
            tuple_ok = false;
        }
    }
    if (!tuple_ok) {
        outputs.clear();
        p.rewind(mark);
        outputs.push_back(p.expr());
        if (!p.at_end())
            p.fail("unexpected trailing input");
    }
    return SmoothMap(name, vars, std::move(outputs));
}

} // namespace weilkit
