#pragma once

#include <Eigen/Core>
#include <vector>

namespace socv {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Discrete flow of s' = A(t) s + C(t) w(t) under classical RK4 with A, C
/// and w interpolated linearly to step midpoints. One step is the affine map
///
///   s[k+1] = Phi[k] s[k] + W0[k] w[k] + W1[k] w[k+1],
///
/// so both the forward pass and its exact transpose are available.
class LinearPropagator {
 public:
  LinearPropagator() = default;
  LinearPropagator(double h, const std::vector<MatrixXd>& A, const std::vector<MatrixXd>& C);

  int steps() const noexcept { return static_cast<int>(phi_.size()); }
  int state_dim() const noexcept { return n_; }
  int input_dim() const noexcept { return q_; }

  /// w has one row per node; returns states as rows.
  MatrixXd forward(const VectorXd& s0, const MatrixXd& w) const;

  /// Given g with rows dJ/ds[k], returns dJ/ds[0] and dJ/dw (rows per node)
  /// for the linear functional J = sum_k g[k] . s[k].
  void adjoint(const MatrixXd& g, VectorXd& d_s0, MatrixXd& d_w) const;

  const MatrixXd& phi(int k) const { return phi_[static_cast<std::size_t>(k)]; }
  const MatrixXd& w0(int k) const { return w0_[static_cast<std::size_t>(k)]; }
  const MatrixXd& w1(int k) const { return w1_[static_cast<std::size_t>(k)]; }

 private:
  int n_ = 0;
  int q_ = 0;
  std::vector<MatrixXd> phi_, w0_, w1_;
};

}  // namespace socv
