#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "socv/problem.hpp"
#include "socv/trajectory.hpp"

namespace socv {

/// lambda = (alpha, beta, p). alpha and beta follow the endpoint order of
/// ProblemDef (cost first); p holds one costate row per node.
struct Multiplier {
  VectorXd alpha;
  VectorXd beta;
  MatrixXd p;
  bool normalized = false;

  double l1_norm() const { return alpha.lpNorm<1>() + beta.lpNorm<1>(); }
  /// (alpha, beta) stacked.
  VectorXd coefficients() const;
};

Multiplier operator*(double c, const Multiplier& m);
Multiplier operator+(const Multiplier& a, const Multiplier& b);

/// Backward RK4 of -p' = p Fx from p(T) = D_xT l[alpha, beta].
MatrixXd integrate_costate(const ProblemDef& p, const LinearizedSystem& lin, const Trajectory& traj,
                           const VectorXd& alpha, const VectorXd& beta);
MatrixXd integrate_costate(const ProblemDef& p, const Trajectory& traj, const VectorXd& alpha,
                           const VectorXd& beta);

/// Multiplier with p filled in by integrate_costate.
Multiplier make_multiplier(const ProblemDef& p, const LinearizedSystem& lin, const Trajectory& traj,
                           const VectorXd& alpha, const VectorXd& beta);

struct MultiplierResiduals {
  double transv0 = 0.0;  // |p(0) + D_x0 l|
  double Hu = 0.0;       // max over nodes |H_u|
  double Hv = 0.0;       // max over nodes |H_v|
  double max() const { return std::max(transv0, std::max(Hu, Hv)); }
};

MultiplierResiduals multiplier_residuals(const ProblemDef& p, const LinearizedSystem& lin,
                                         const Trajectory& traj, const Multiplier& lambda);
MultiplierResiduals multiplier_residuals(const ProblemDef& p, const Trajectory& traj,
                                         const Multiplier& lambda);

enum class MultiplierStatus { found, none_found, infeasible };
const char* to_string(MultiplierStatus s);

struct MultiplierOptions {
  double feasibility_tol = 1e-6;
  double active_tol = 1e-8;
  long max_enumeration = 500000;  // subset tests before switching to sampling
  int samples = 4000;
  std::uint64_t seed = 1;
};

/// Lambda as a section of the null space of the first-order map.
struct MultiplierSet {
  MultiplierStatus status = MultiplierStatus::none_found;
  std::vector<int> free_coefficients;  // indices into (alpha, beta) not fixed at 0
  MatrixXd basis;                      // columns span the null space, full (alpha, beta) coordinates
  VectorXd singular_values;
  double threshold = 0.0;              // tol * sigma_max
  std::vector<Multiplier> vertices;    // normalized extreme points of co Lambda
  bool exhaustive = true;              // false when vertices were sampled
  double certificate_bound = 0.0;
  double max_residual = 0.0;
  int equality_rank = 0;
  bool equality_qualified = true;
  std::string note;

  int dimension() const { return static_cast<int>(basis.cols()); }
};

MultiplierSet find_multipliers(const ProblemDef& p, const Trajectory& traj, double tol,
                               const MultiplierOptions& opt = {});

struct ClassFlags {
  bool in_co_lambda_sharp = false;
  bool in_G_co_lambda_sharp = false;
  double min_eig_Huu = 0.0;
  double max_abs_Hvu = 0.0;
  double max_abs_G = 0.0;
};

ClassFlags classify_multiplier(const ProblemDef& p, const LinearizedSystem& lin,
                               const Trajectory& traj, const Multiplier& lambda, double tol);
ClassFlags classify_multiplier(const ProblemDef& p, const Trajectory& traj,
                               const Multiplier& lambda, double tol);

/// True when 0 lies in the convex hull of the points up to `tol` (Euclidean).
bool zero_in_convex_hull(const std::vector<VectorXd>& points, double tol);

}  // namespace socv
