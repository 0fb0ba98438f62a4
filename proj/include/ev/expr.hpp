#pragma once

#include <string>

#include "ev/bipoly.hpp"

namespace ev {

// Expression grammar over variables n and v:
//   expr   := term (('+' | '-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | primary
//   primary:= atom ('^' uint)?          exponent a nonnegative integer <= 64
//   atom   := rational | 'n' | 'v' | '(' expr ')'
// Rational literals are 'p' or 'p/q' (the '/' belongs to the literal; there is
// no division operator). No implicit multiplication. Whitespace is free.
BiPoly parse_expr(const std::string& text);

// Canonical rendering; parse_expr(print_expr(p)) == p.
std::string print_expr(const BiPoly& p);

} // namespace ev
