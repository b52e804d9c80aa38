#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "socv/polynomial.hpp"

namespace socv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// n polynomial components over the n+l variables (x, u).
struct VectorField {
  std::vector<Polynomial> components;
};

enum class EndpointKind { cost, inequality, equality };

/// Scalar endpoint function over (x(0), x(T)), arity 2n.
struct EndpointMap {
  Polynomial value;
  EndpointKind kind = EndpointKind::cost;
};

/// Partially-affine problem
///
///   min phi_0(x(0), x(T))
///   x' = f_0(x, u) + sum_i v_i f_i(x, u)
///   phi_i(x(0), x(T)) <= 0,  eta_j(x(0), x(T)) = 0.
///
/// Endpoint indices run cost (0), inequalities (1..dphi), equalities
/// (dphi+1..dphi+deta); multiplier vectors (alpha, beta) use the same order.
struct ProblemDef {
  std::string name;
  int n = 0;
  int l = 0;
  int m = 0;
  double T = 1.0;
  std::vector<VectorField> fields;  // f_0 .. f_m
  EndpointMap cost;
  std::vector<EndpointMap> inequalities;
  std::vector<EndpointMap> equalities;
  VectorXd reference_x0;  // initial state of the reference trajectory; empty means 0

  int d_phi() const noexcept { return static_cast<int>(inequalities.size()); }
  int d_eta() const noexcept { return static_cast<int>(equalities.size()); }
  int endpoint_count() const noexcept { return 1 + d_phi() + d_eta(); }
  const EndpointMap& endpoint(int which) const;

  /// Throws DimensionError / DomainError when the invariants fail.
  void validate() const;
};

/// Value and derivatives of one vector field f_i at (x, u).
/// hess_xx[c] is the x-Hessian of component c, hess_xu[c] the n x l mixed block.
struct FieldEval {
  int order = 0;
  VectorXd value;
  MatrixXd jac_x;
  MatrixXd jac_u;
  std::vector<MatrixXd> hess_xx;
  std::vector<MatrixXd> hess_xu;
  std::vector<MatrixXd> hess_uu;
};

struct EndpointEval {
  double value = 0.0;
  VectorXd gradient;  // length 2n, ordered (x0, xT)
  MatrixXd hessian;   // 2n x 2n
};

FieldEval eval_field(const ProblemDef& p, int i, const VectorXd& x, const VectorXd& u, int order);

EndpointEval eval_endpoint(const ProblemDef& p, int which, const VectorXd& x0, const VectorXd& xT,
                           int order);

/// F(x, u, v) = f_0(x, u) + sum_i v_i f_i(x, u).
VectorXd eval_dynamics(const ProblemDef& p, const VectorXd& x, const VectorXd& u,
                       const VectorXd& v);

}  // namespace socv
