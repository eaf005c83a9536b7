#pragma once

#include <functional>
#include <string>

namespace keldysh {

// Compiles a one-variable arithmetic expression in the boundary variable t.
//
// Grammar: numbers, t, + - * / ^ (right-associative power), parentheses,
// unary minus, and the functions exp, sqrt, abs, ind.  ind(e) is the
// indicator of e > 0.  Whitespace is ignored.
//
// Returns a callable evaluating the expression; throws std::invalid_argument
// naming the offending position on a malformed input.
std::function<double(double)> compile_expression(const std::string& text);

}  // namespace keldysh
