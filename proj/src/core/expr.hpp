#pragma once

#include <functional>
#include <string>

namespace sconv {

/// Compiles a scalar expression in the variables x, y (and the aliases
/// t = x, r = sqrt(x^2 + y^2)) into an evaluable function.
///
/// Grammar: + - * / ^ with the usual precedence, parentheses, unary
/// minus, numeric literals, the constants pi and e, and the functions
/// sin cos tan exp log sqrt abs tanh floor pow min max clamp.
std::function<double(double, double)> compile_expression(const std::string& text);

} // namespace sconv
