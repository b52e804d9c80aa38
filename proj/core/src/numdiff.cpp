#include "socv/numdiff.hpp"

namespace socv {

Eigen::MatrixXd time_derivative_rows(const Eigen::MatrixXd& samples, double h) {
  std::vector<Eigen::RowVectorXd> rows(static_cast<std::size_t>(samples.rows()));
  for (Eigen::Index k = 0; k < samples.rows(); ++k) rows[static_cast<std::size_t>(k)] = samples.row(k);
  const auto d = time_derivative(rows, h);
  Eigen::MatrixXd out(samples.rows(), samples.cols());
  for (Eigen::Index k = 0; k < samples.rows(); ++k) out.row(k) = d[static_cast<std::size_t>(k)];
  return out;
}

Eigen::VectorXd trapezoid_weights(int N, double h) {
  if (N < 1) throw DomainError("trapezoid_weights: N must be positive");
  Eigen::VectorXd w = Eigen::VectorXd::Constant(N + 1, h);
  w[0] = w[N] = 0.5 * h;
  return w;
}

Eigen::MatrixXd cumulative_trapezoid(const Eigen::MatrixXd& samples, double h) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(samples.rows(), samples.cols());
  for (Eigen::Index k = 1; k < samples.rows(); ++k) {
    y.row(k) = y.row(k - 1) + 0.5 * h * (samples.row(k - 1) + samples.row(k));
  }
  return y;
}

}  // namespace socv
