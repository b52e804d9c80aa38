#include "socv/propagation.hpp"

#include "socv/errors.hpp"

namespace socv {

namespace {

// RK4 step for s' = A s + b with A, b given at the left end, the midpoint and
// the right end. Columns of s and b are handled independently.
MatrixXd rk4(double h, const MatrixXd& A0, const MatrixXd& Am, const MatrixXd& A1, const MatrixXd& s,
             const MatrixXd& b0, const MatrixXd& bm, const MatrixXd& b1) {
  const MatrixXd k1 = A0 * s + b0;
  const MatrixXd k2 = Am * (s + 0.5 * h * k1) + bm;
  const MatrixXd k3 = Am * (s + 0.5 * h * k2) + bm;
  const MatrixXd k4 = A1 * (s + h * k3) + b1;
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

LinearPropagator::LinearPropagator(double h, const std::vector<MatrixXd>& A,
                                   const std::vector<MatrixXd>& C) {
  if (A.size() != C.size() || A.size() < 2) {
    throw DimensionError("LinearPropagator: need matching A, C samples on at least two nodes");
  }
  n_ = static_cast<int>(A[0].rows());
  q_ = static_cast<int>(C[0].cols());
  const std::size_t N = A.size() - 1;
  phi_.resize(N);
  w0_.resize(N);
  w1_.resize(N);
  const MatrixXd I = MatrixXd::Identity(n_, n_);
  const MatrixXd Zs = MatrixXd::Zero(n_, n_);
  const MatrixXd Zq = MatrixXd::Zero(n_, q_);
  for (std::size_t k = 0; k < N; ++k) {
    const MatrixXd Am = 0.5 * (A[k] + A[k + 1]);
    const MatrixXd Cm = 0.5 * (C[k] + C[k + 1]);
    phi_[k] = rk4(h, A[k], Am, A[k + 1], I, Zs, Zs, Zs);
    // w at the midpoint is (w[k] + w[k+1]) / 2, hence the halved Cm.
    w0_[k] = rk4(h, A[k], Am, A[k + 1], Zq, C[k], 0.5 * Cm, Zq);
    w1_[k] = rk4(h, A[k], Am, A[k + 1], Zq, Zq, 0.5 * Cm, C[k + 1]);
  }
}

MatrixXd LinearPropagator::forward(const VectorXd& s0, const MatrixXd& w) const {
  const int N = steps();
  if (s0.size() != n_ || w.rows() != N + 1 || w.cols() != q_) {
    throw DimensionError("LinearPropagator::forward: size mismatch");
  }
  MatrixXd s(N + 1, n_);
  s.row(0) = s0.transpose();
  VectorXd cur = s0;
  for (int k = 0; k < N; ++k) {
    VectorXd next = phi_[k] * cur;
    if (q_ > 0) next += w0_[k] * w.row(k).transpose() + w1_[k] * w.row(k + 1).transpose();
    s.row(k + 1) = next.transpose();
    cur = std::move(next);
  }
  return s;
}

void LinearPropagator::adjoint(const MatrixXd& g, VectorXd& d_s0, MatrixXd& d_w) const {
  const int N = steps();
  if (g.rows() != N + 1 || g.cols() != n_) throw DimensionError("LinearPropagator::adjoint: size mismatch");
  d_w = MatrixXd::Zero(N + 1, q_);
  VectorXd a = g.row(N).transpose();
  for (int k = N - 1; k >= 0; --k) {
    if (q_ > 0) {
      d_w.row(k) += (w0_[k].transpose() * a).transpose();
      d_w.row(k + 1) += (w1_[k].transpose() * a).transpose();
    }
    a = g.row(k).transpose() + phi_[k].transpose() * a;
  }
  d_s0 = a;
}

}  // namespace socv
