#pragma once

#include <string>

#include "sha_predict/arith.hpp"

namespace sha_predict {

// Exact number literals: integers, p/q, sqrtD, and arithmetic over them
// with + - * / and parentheses, e.g. "(1+sqrt5)/2", "sqrt2-1",
// "(3-2*sqrt7)/5", "2sqrt3". At most one radicand may appear. A literal
// without any sqrt comes back rational (is_rational()).
QuadNumber parse_quad_literal(const std::string& text);

} // namespace sha_predict
