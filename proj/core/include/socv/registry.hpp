#pragma once

#include <optional>
#include <string>
#include <vector>

#include "socv/problem.hpp"
#include "socv/trajectory.hpp"

namespace socv {

/// Built-in problems. All use T = 1 unless overridden and have the zero
/// trajectory (x0 = 0, u = v = 0) as reference candidate.
///   pe            3 states, one nonlinear and one affine control, fixed initial state
///   lq-decoupled  strongly convex transformed form with a closed-form rho_hat
///   goh-violator  two affine controls with p [f1, f2]^x != 0
///   lc-violator   pe with -u^2 in the running term (H_uu < 0)
///   cubic         cubic terms in u and x1, for the expansion probe
std::vector<std::string> registry_names();

/// Throws UnknownProblem listing the known names.
ProblemDef registry_problem(const std::string& name, std::optional<double> T = std::nullopt);

struct RegistryEntry {
  ProblemDef problem;
  Trajectory reference;
};

RegistryEntry registry(const std::string& name, int N = 1000, std::optional<double> T = std::nullopt);

}  // namespace socv
