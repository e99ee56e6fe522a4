#pragma once

#include <string>

#include "mpqg/quea.hpp"

namespace mpqg {

// Expression language over a realization:
//   atoms     E1 F2 H3 (basis of h) T+1 T-2 S1 L1, rationals a/b, hbar (or h), exp(...)
//   operators + - * with the usual precedence, unary minus, parentheses
// Products of series are truncated at the given order. exp takes a toral argument of hbar-valuation >= 1
// and is expanded through that order.
GenPoly parse_expr(const std::string& src, const Realization& R, int order);

}  // namespace mpqg
