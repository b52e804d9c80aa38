#pragma once

#include <Eigen/Core>
#include <vector>

#include "socv/errors.hpp"

namespace socv {

/// Derivative of node samples on a uniform grid of spacing h.
/// 4th-order central stencil inside, 4th-order one-sided stencils on the two
/// nodes next to each end; 2nd-order fallback when fewer than 5 samples.
/// T is any type closed under + and scalar *, e.g. double or Eigen matrices.
template <class T>
std::vector<T> time_derivative(const std::vector<T>& f, double h) {
  const int count = static_cast<int>(f.size());
  if (count < 3) throw DomainError("time_derivative: need at least 3 samples");
  std::vector<T> d(f.size());
  if (count < 5) {
    const double c = 1.0 / (2.0 * h);
    d[0] = c * (-3.0 * f[0] + 4.0 * f[1] - 1.0 * f[2]);
    for (int k = 1; k + 1 < count; ++k) d[k] = c * (f[k + 1] - f[k - 1]);
    const int e = count - 1;
    d[e] = c * (3.0 * f[e] - 4.0 * f[e - 1] + 1.0 * f[e - 2]);
    return d;
  }
  const double c = 1.0 / (12.0 * h);
  d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
  d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + 1.0 * f[4]);
  for (int k = 2; k + 2 < count; ++k) {
    d[k] = c * (1.0 * f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - 1.0 * f[k + 2]);
  }
  const int e = count - 1;
  d[e - 1] = c * (3.0 * f[e] + 10.0 * f[e - 1] - 18.0 * f[e - 2] + 6.0 * f[e - 3] - 1.0 * f[e - 4]);
  d[e] = c * (25.0 * f[e] - 48.0 * f[e - 1] + 36.0 * f[e - 2] - 16.0 * f[e - 3] + 3.0 * f[e - 4]);
  return d;
}

/// Row-wise version: rows of `samples` are nodes.
Eigen::MatrixXd time_derivative_rows(const Eigen::MatrixXd& samples, double h);

/// Trapezoid weights for N+1 nodes of spacing h.
Eigen::VectorXd trapezoid_weights(int N, double h);

/// Cumulative trapezoid integral of the rows, starting from zero.
Eigen::MatrixXd cumulative_trapezoid(const Eigen::MatrixXd& samples, double h);

}  // namespace socv
