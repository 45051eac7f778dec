#pragma once

#include "weilkit/expr.hpp"

#include <string>
#include <vector>

namespace weilkit {

// Grammar (whitespace is insignificant):
//
//   map      := KEYWORD name '(' [ident {',' ident}] ')' '->' outputs
//   outputs  := '(' expr {',' expr} ')' | expr
//   expr     := term {('+' | '-') term}
//   term     := unary {('*' | '/') unary}
//   unary    := '-' unary | power
//   power    := primary ['^' ['('] ['-'] integer [')']]
//   primary  := number | ident | func '(' expr ')' | '(' expr ')'
//   func     := exp | log | sin | cos | sqrt
//   number   := digits ['.' digits]
//
// KEYWORD is `map` for smooth maps and `fibered` for fibered objects.
// Decimal literals are read as exact rationals.

Expr parse_expression(const std::string &text, const std::vector<std::string> &variables);

/// Variables are the free identifiers, sorted alphabetically.
Expr parse_expression(const std::string &text, std::vector<std::string> &variables_out);

SmoothMap parse_map(const std::string &text, const std::string &keyword = "map");

} // namespace weilkit
