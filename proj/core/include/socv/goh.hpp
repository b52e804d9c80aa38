#pragma once

#include <string>
#include <vector>

#include "socv/multipliers.hpp"
#include "socv/problem.hpp"
#include "socv/trajectory.hpp"

namespace socv {

/// Partials of the pre-Hamiltonian H = p F(x, u, v) at every node.
struct HBlocks {
  std::vector<VectorXd> Hx, Hu, Hv;
  std::vector<MatrixXd> Hxx;  // n x n
  std::vector<MatrixXd> Hux;  // l x n
  std::vector<MatrixXd> Hvx;  // m x n
  std::vector<MatrixXd> Huu;  // l x l
  std::vector<MatrixXd> Hvu;  // m x l
};

HBlocks h_blocks(const ProblemDef& p, const Trajectory& traj, const Multiplier& lambda);

/// Coefficients of the transformed second variation, node by node, plus the
/// data of the boundary form g at t = T.
struct GohMatrices {
  Grid grid;
  int n = 0, l = 0, m = 0;
  std::vector<MatrixXd> Fx, Fu, Fv;
  HBlocks H;
  std::vector<MatrixXd> B;  // n x m
  std::vector<MatrixXd> M;  // m x n
  std::vector<MatrixXd> E;  // m x l
  std::vector<MatrixXd> S;  // m x m, symmetric
  std::vector<MatrixXd> G;  // m x m, antisymmetric
  std::vector<MatrixXd> R;  // m x m, symmetric
  MatrixXd HvxT, ST, FvT;
  MatrixXd lpp;  // 2n x 2n Hessian of l[alpha, beta] at (x(0), x(T))

  double max_abs_G() const;
};

GohMatrices goh_matrices(const ProblemDef& p, const LinearizedSystem& lin, const Trajectory& traj,
                         const Multiplier& lambda);
GohMatrices goh_matrices(const ProblemDef& p, const Trajectory& traj, const Multiplier& lambda);

/// [f_i, f_j]^x = (D_x f_i) f_j - (D_x f_j) f_i.
VectorXd lie_bracket_x(const ProblemDef& p, int i, int j, const VectorXd& x, const VectorXd& u);

/// R through brackets: R_ij = -p [f_j, b_i]^x with b_i = [F, f_i]^x - (D_u f_i) udot,
/// F = f_0 + sum v_k f_k and udot frozen. Valid where G vanishes.
std::vector<MatrixXd> r_bracket(const ProblemDef& p, const LinearizedSystem& lin,
                                const Trajectory& traj, const Multiplier& lambda);

struct RCrossCheck {
  bool applicable = false;
  double max_deviation = 0.0;
  double max_abs_G = 0.0;
};

RCrossCheck r_cross_check(const ProblemDef& p, const Trajectory& traj, const Multiplier& lambda,
                          const GohMatrices& gm, double tol = 1e-8);

/// Node-indexed JSON bundle of all matrices.
std::string goh_matrices_json(const GohMatrices& gm, int indent = -1);

}  // namespace socv
