#pragma once

#include <map>
#include <string>
#include <vector>

#include "socv/goh.hpp"
#include "socv/multipliers.hpp"
#include "socv/problem.hpp"
#include "socv/trajectory.hpp"

namespace socv {

/// Value of a quadratic form and its split into named terms.
struct QuadraticEvaluation {
  double value = 0.0;
  std::map<std::string, double> breakdown;
};

/// l[lambda](x(0), x(T)) + int p (F(x, u, v) - x') with x' from finite differences.
double lagrangian_value(const ProblemDef& p, const Trajectory& w, const Multiplier& lambda);

/// Second variation in the original variables; terms "endpoint", "Hxx",
/// "Hux", "Hvx", "Huu", "Hvu".
QuadraticEvaluation omega(const GohMatrices& gm, const Direction& dir);

/// Transformed form including the v^T G y term. Refused (FormRefused) unless
/// the multiplier is in the H_uu >= 0, H_vu = 0 class.
QuadraticEvaluation omega_P(const GohMatrices& gm, const ClassFlags& flags, const GohDirection& g,
                            const MatrixXd& v);

/// Transformed form without the G term; needs no v. Refused unless G vanishes.
QuadraticEvaluation omega_P2(const GohMatrices& gm, const ClassFlags& flags, const GohDirection& g);

/// Boundary form g(xi0, xiT, h).
double boundary_form(const GohMatrices& gm, const VectorXd& xi0, const VectorXd& xiT, const VectorXd& h);

/// Perturbation of the initial state and both controls.
struct Perturbation {
  VectorXd x0;
  MatrixXd u;
  MatrixXd v;
};

struct ProbeResult {
  std::vector<double> sigmas;      // the ones that integrated
  std::vector<double> delta_L;     // L(w + s dw) - L(w)
  std::vector<double> remainders;  // delta_L - s^2 Omega
  double omega = 0.0;
  double slope = 0.0;              // log-log fit of |remainder|; NaN when all vanish
  bool zero_remainder = false;
  bool quadrature_limited = false; // |r| / (s^2 |Omega|) below 1e-5 throughout
  std::vector<std::string> warnings;
};

ProbeResult expansion_probe(const ProblemDef& p, const Trajectory& traj, const Multiplier& lambda,
                            const Perturbation& dw,
                            const std::vector<double>& sigmas = {1e-1, 3e-2, 1e-2, 3e-3, 1e-3});

}  // namespace socv
