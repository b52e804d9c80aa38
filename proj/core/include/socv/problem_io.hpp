#pragma once

#include <string>
#include <string_view>

#include "socv/problem.hpp"

namespace socv {

/// Parses the JSON problem document
///
///   { "n", "l", "m", "T", "fields": [[[{coef, x, u}...] x n] x (m+1)],
///     "cost": [{coef, x}...], "inequalities": [...], "equalities": [...] }
///
/// Endpoint exponent arrays have length 2n ordered (x0, xT). Optional keys:
/// "name", "x0" (reference initial state).
ProblemDef parse_problem(std::string_view text);

/// Inverse of parse_problem; emits canonical polynomials.
std::string emit_problem(const ProblemDef& p, int indent = 2);

ProblemDef load_problem_file(const std::string& path);

}  // namespace socv
