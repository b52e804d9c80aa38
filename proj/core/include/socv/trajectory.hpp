#pragma once

#include <Eigen/Core>
#include <vector>

#include "socv/problem.hpp"
#include "socv/propagation.hpp"

namespace socv {

/// Uniform grid t_k = k T / N, k = 0..N.
struct Grid {
  int N = 0;
  double T = 1.0;

  /// Throws DomainError unless N >= 2 and T > 0.
  static Grid make(double T, int N);

  double h() const noexcept { return T / N; }
  double t(int k) const noexcept { return (T * k) / N; }
  int nodes() const noexcept { return N + 1; }
  VectorXd times() const;
  VectorXd weights() const;  // trapezoid
};

/// Node samples: row k holds x(t_k), u(t_k), v(t_k).
struct Trajectory {
  Grid grid;
  MatrixXd x;
  MatrixXd u;
  MatrixXd v;
};

/// Classical RK4 with controls interpolated linearly inside each step.
/// Throws IntegrationDiverged at the first non-finite node.
Trajectory integrate_state(const ProblemDef& p, const VectorXd& x0, const MatrixXd& u,
                           const MatrixXd& v, const Grid& grid);

/// Zero controls from the problem's reference initial state.
Trajectory reference_trajectory(const ProblemDef& p, const Grid& grid);

struct FeasibilityReport {
  double max_defect = 0.0;
  int worst_step = -1;
  double cost = 0.0;
  VectorXd eta;            // equality values
  VectorXd phi;            // inequality values
  std::vector<bool> active;  // |phi_i| <= tol
  double max_eta = 0.0;
  double max_phi = 0.0;    // largest positive inequality value, 0 if none
  bool feasible = false;
};

FeasibilityReport feasibility_report(const ProblemDef& p, const Trajectory& traj, double tol);

/// Fx = D_x f0 + sum v_i D_x f_i (likewise Fu), Fv columns f_i, all at nodes;
/// udot by finite differences of the nominal u.
struct LinearizedSystem {
  Grid grid;
  std::vector<MatrixXd> Fx;
  std::vector<MatrixXd> Fu;
  std::vector<MatrixXd> Fv;
  MatrixXd udot;
};

LinearizedSystem linearize(const ProblemDef& p, const Trajectory& traj);

/// x' = Fx x + Fu u + Fv v.
LinearPropagator state_propagator(const LinearizedSystem& lin);

/// B = Fx Fv - d/dt Fv at every node.
std::vector<MatrixXd> goh_b_matrix(const LinearizedSystem& lin);

/// xi' = Fx xi + Fu u + B y.
LinearPropagator goh_propagator(const LinearizedSystem& lin, const std::vector<MatrixXd>& B);

struct Direction {
  VectorXd x0;
  MatrixXd u;
  MatrixXd v;
  MatrixXd x;  // derived
};

struct GohDirection {
  VectorXd xi0;
  MatrixXd u;
  MatrixXd y;
  VectorXd h;
  MatrixXd xi;  // derived
  double dynamics_residual = 0.0;  // max node defect of the transformed equation
};

Direction integrate_linearized(const LinearizedSystem& lin, const VectorXd& x0, const MatrixXd& u,
                               const MatrixXd& v);
Direction integrate_linearized(const LinearPropagator& prop, const VectorXd& x0, const MatrixXd& u,
                               const MatrixXd& v);

/// y = cumulative trapezoid of v, xi = x - Fv y, h = y(T).
GohDirection goh_transform_direction(const LinearizedSystem& lin, const Direction& dir);

/// Inverse map on the grid: x = xi + Fv y and v = dy/dt (finite differences).
Direction goh_inverse(const LinearizedSystem& lin, const GohDirection& g);

MatrixXd integrate_goh_state(const LinearPropagator& goh_prop, const VectorXd& xi0,
                             const MatrixXd& u, const MatrixXd& y);

/// |x0|^2 + |h|^2 + int (|u|^2 + |y|^2), trapezoid.
double gamma_order(const Grid& grid, const VectorXd& x0, const MatrixXd& u, const MatrixXd& y,
                   const VectorXd& h);

}  // namespace socv
