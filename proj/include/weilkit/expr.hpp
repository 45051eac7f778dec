#pragma once

#include "weilkit/scalar.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace weilkit {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Log, Sin, Cos, Sqrt };

const char *to_string(Op op);
bool is_transcendental(Op op);

struct ExprNode;

/// Immutable expression DAG over variables u_0..u_{m-1}. Builders fold
/// constant subterms and the trivial identities 0+e, 1*e, 0*e, e^1, e^0.
class Expr {
public:
    Expr() = default;
    Expr(Rational q) : Expr(constant(std::move(q))) {}
    Expr(int v) : Expr(constant(Rational(v))) {}

    static Expr constant(Rational q);
    static Expr variable(std::size_t index);
    static Expr apply(Op op, const Expr &arg);
    static Expr pow(const Expr &base, long exponent);

    const ExprNode &node() const { return *node_; }
    const ExprNode *id() const { return node_.get(); }
    Op op() const;
    bool is_constant() const { return op() == Op::Const; }
    bool is_constant(const Rational &q) const;

    friend Expr operator+(const Expr &a, const Expr &b);
    friend Expr operator-(const Expr &a, const Expr &b);
    friend Expr operator*(const Expr &a, const Expr &b);
    friend Expr operator/(const Expr &a, const Expr &b);
    Expr operator-() const;

private:
    explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
    static Expr make(ExprNode n);
    std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
    Op op = Op::Const;
    Rational value;          // Const
    std::size_t var = 0;     // Var
    long exponent = 0;       // Pow
    Expr a, b;               // operands
};

Expr exp(const Expr &e);
Expr log(const Expr &e);
Expr sin(const Expr &e);
Expr cos(const Expr &e);
Expr sqrt(const Expr &e);

/// Structural equality.
bool same_expr(const Expr &a, const Expr &b);
bool has_transcendental(const Expr &e);
/// Largest variable index used plus one.
std::size_t variable_bound(const Expr &e);
/// Replaces u_i by args[i].
Expr substitute(const Expr &e, const std::vector<Expr> &args);
std::size_t node_count(const Expr &e);

/// Prints with minimal parentheses so that parsing gives back the same tree.
std::string print(const Expr &e, const std::vector<std::string> &names);

/// A map R^m -> R^n given by n expressions in m named variables.
class SmoothMap {
public:
    SmoothMap(std::string name, std::vector<std::string> variables, std::vector<Expr> outputs);

    static SmoothMap identity(std::size_t m);
    /// Projection R^m -> R^(indices.size()).
    static SmoothMap projection(std::size_t m, const std::vector<std::size_t> &indices);

    const std::string &name() const { return name_; }
    const std::vector<std::string> &variables() const { return variables_; }
    const std::vector<Expr> &outputs() const { return outputs_; }
    std::size_t arity_in() const { return variables_.size(); }
    std::size_t arity_out() const { return outputs_.size(); }
    bool has_transcendental() const;

    SmoothMap renamed(std::string name) const;

    /// DSL form: map f(u,v) -> (e1, e2)
    std::string str() const;

private:
    std::string name_;
    std::vector<std::string> variables_;
    std::vector<Expr> outputs_;
};

/// g after f.
SmoothMap compose(const SmoothMap &g, const SmoothMap &f);
/// <f, g>: R^m -> R^(n1+n2).
SmoothMap pairing(const SmoothMap &f, const SmoothMap &g);

std::vector<std::string> default_variable_names(std::size_t m);

} // namespace weilkit
