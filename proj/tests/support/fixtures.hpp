#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "socv/multipliers.hpp"
#include "socv/registry.hpp"
#include "socv/trajectory.hpp"

namespace socv::test {

/// alpha0 = 1, beta = (0, 0, -1) on pe-shaped problems.
inline Multiplier pe_unit(const ProblemDef& p, const Trajectory& traj) {
  VectorXd alpha(1);
  alpha << 1.0;
  VectorXd beta = VectorXd::Zero(3);
  beta(2) = -1.0;
  return make_multiplier(p, linearize(p, traj), traj, alpha, beta);
}

/// Smooth random samples: each column is sum_k c_k cos(k pi t / T) + d_k sin(...),
/// k = 0..modes, coefficients N(0, 1).
inline MatrixXd smooth_samples(const Grid& g, int cols, std::mt19937_64& rng, int modes = 3) {
  std::normal_distribution<double> nd;
  MatrixXd out = MatrixXd::Zero(g.nodes(), cols);
  for (int c = 0; c < cols; ++c) {
    for (int k = 0; k <= modes; ++k) {
      const double a = nd(rng), b = nd(rng);
      for (int i = 0; i < g.nodes(); ++i) {
        const double s = M_PI * k * g.t(i) / g.T;
        out(i, c) += a * std::cos(s) + b * std::sin(s);
      }
    }
  }
  return out;
}

inline VectorXd gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

inline MatrixXd constant_rows(const Grid& g, const VectorXd& value) {
  MatrixXd out(g.nodes(), value.size());
  for (int i = 0; i < g.nodes(); ++i) out.row(i) = value.transpose();
  return out;
}

}  // namespace socv::test
