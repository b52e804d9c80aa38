#pragma once

#include <vector>

#include "socv/goh.hpp"
#include "socv/propagation.hpp"
#include "socv/trajectory.hpp"

namespace socv {

/// Discrete transformed cone. Variables z = (xi0, u nodes, y nodes, h); the
/// transformed state follows from z through the RK4 propagator of
/// xi' = Fx xi + Fu u + B y. Constraint rows act on (xi0, xi(T) + Fv(T) h).
struct DiscretizedCone {
  Grid grid;
  int n = 0, l = 0, m = 0;
  LinearPropagator prop;
  MatrixXd A_eq;                   // one row per equality
  MatrixXd A_in;                   // cost row, then active inequalities
  std::vector<int> active_inequalities;

  int dim() const noexcept { return n + grid.nodes() * (l + m) + m; }
  int u_index(int k, int i) const noexcept { return n + k * l + i; }
  int y_index(int k, int i) const noexcept { return n + grid.nodes() * l + k * m + i; }
  int h_index(int i) const noexcept { return n + grid.nodes() * (l + m) + i; }

  VectorXd pack(const GohDirection& g) const;
  /// Fills xi by propagation.
  GohDirection unpack(const VectorXd& z) const;
  /// Diagonal of the gamma_P Gram matrix: 1 on xi0 and h, trapezoid weights on u and y.
  VectorXd gamma_diag() const;
  double gamma(const VectorXd& z) const;
  /// A_in rows with no effect on any variable (then the subspace equals the cone).
  bool inequalities_trivial(double eps = 1e-12) const;
};

DiscretizedCone build_cone(const ProblemDef& p, const Trajectory& traj, const LinearizedSystem& lin,
                           double active_tol);

/// Q z where Omega_P2(z) = z^T Q z, evaluated matrix-free (forward + adjoint pass).
VectorXd apply_omega_P2(const DiscretizedCone& cone, const GohMatrices& gm, const VectorXd& z);

/// z^T Q z.
double omega_P2_value(const DiscretizedCone& cone, const GohMatrices& gm, const VectorXd& z);

/// Dense symmetric Q, one matrix-free application per column.
MatrixXd assemble_omega_P2(const DiscretizedCone& cone, const GohMatrices& gm);

}  // namespace socv
