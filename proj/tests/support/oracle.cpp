#include "oracle.hpp"

#include <Eigen/SVD>
#include <Eigen/Eigenvalues>

namespace socv::test {

namespace {

struct Layout {
  int n, l, m, nodes;
  int xi(int k) const { return k * n; }
  int u(int k) const { return nodes * n + k * l; }
  int y(int k) const { return nodes * (n + l) + k * m; }
  int h() const { return nodes * (n + l + m); }
  int dim() const { return nodes * (n + l + m) + m; }
};

// coef * a^T A b added symmetrically to Q (value = z^T Q z).
void add_bilinear(MatrixXd& Q, int ia, int ib, const MatrixXd& A, double coef) {
  Q.block(ia, ib, A.rows(), A.cols()) += 0.5 * coef * A;
  Q.block(ib, ia, A.cols(), A.rows()) += 0.5 * coef * A.transpose();
}

}  // namespace

OracleResult brute_force_min_ratio(const ProblemDef& p, const Trajectory& traj, const GohMatrices& gm,
                                   double active_tol) {
  const int n = gm.n, l = gm.l, m = gm.m, N = gm.grid.N;
  const double h = gm.grid.h();
  const Layout L{n, l, m, N + 1};
  const int D = L.dim();
  const VectorXd w = gm.grid.weights();

  // RK4 step rows: xi[k+1] - step(xi[k], w[k], w[k+1]) = 0, w = (u, y).
  const int q = l + m;
  auto inputs = [&](int k) {
    MatrixXd Cm(n, q);
    Cm << gm.Fu[static_cast<std::size_t>(k)], gm.B[static_cast<std::size_t>(k)];
    return Cm;
  };
  auto step = [&](int k, const VectorXd& s, const VectorXd& w0, const VectorXd& w1) {
    const MatrixXd& A0 = gm.Fx[static_cast<std::size_t>(k)];
    const MatrixXd& A1 = gm.Fx[static_cast<std::size_t>(k + 1)];
    const MatrixXd Am = 0.5 * (A0 + A1);
    const MatrixXd C0 = inputs(k), C1 = inputs(k + 1);
    const MatrixXd Cm = 0.5 * (C0 + C1);
    const VectorXd wm = 0.5 * (w0 + w1);
    const VectorXd k1 = A0 * s + C0 * w0;
    const VectorXd k2 = Am * (s + 0.5 * h * k1) + Cm * wm;
    const VectorXd k3 = Am * (s + 0.5 * h * k2) + Cm * wm;
    const VectorXd k4 = A1 * (s + h * k3) + C1 * w1;
    return VectorXd(s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };

  std::vector<VectorXd> rows;
  for (int k = 0; k < N; ++k) {
    // Extract the affine step by probing unit vectors.
    MatrixXd Phi(n, n), W0(n, q), W1(n, q);
    const VectorXd zs = VectorXd::Zero(n), zw = VectorXd::Zero(q);
    for (int j = 0; j < n; ++j) Phi.col(j) = step(k, VectorXd::Unit(n, j), zw, zw);
    for (int j = 0; j < q; ++j) {
      W0.col(j) = step(k, zs, VectorXd::Unit(q, j), zw);
      W1.col(j) = step(k, zs, zw, VectorXd::Unit(q, j));
    }
    for (int i = 0; i < n; ++i) {
      VectorXd r = VectorXd::Zero(D);
      r(L.xi(k + 1) + i) = 1.0;
      for (int j = 0; j < n; ++j) r(L.xi(k) + j) -= Phi(i, j);
      for (int j = 0; j < l; ++j) {
        r(L.u(k) + j) -= W0(i, j);
        r(L.u(k + 1) + j) -= W1(i, j);
      }
      for (int j = 0; j < m; ++j) {
        r(L.y(k) + j) -= W0(i, l + j);
        r(L.y(k + 1) + j) -= W1(i, l + j);
      }
      rows.push_back(r);
    }
  }

  // zeta = (xi0, xiN + FvT h) as a linear map of z.
  MatrixXd Z = MatrixXd::Zero(2 * n, D);
  Z.block(0, L.xi(0), n, n).setIdentity();
  Z.block(n, L.xi(N), n, n).setIdentity();
  if (m > 0) Z.block(n, L.h(), n, m) = gm.FvT;

  const VectorXd x0 = traj.x.row(0).transpose(), xT = traj.x.row(N).transpose();
  for (int e = 0; e < p.endpoint_count(); ++e) {
    const bool is_ineq = e >= 1 && e <= p.d_phi();
    if (is_ineq && std::abs(eval_endpoint(p, e, x0, xT, 0).value) > active_tol) continue;
    const VectorXd g = eval_endpoint(p, e, x0, xT, 1).gradient;
    rows.push_back(Z.transpose() * g);
  }

  MatrixXd C(static_cast<int>(rows.size()), D);
  for (std::size_t i = 0; i < rows.size(); ++i) C.row(static_cast<int>(i)) = rows[i].transpose();

  MatrixXd Q = MatrixXd::Zero(D, D);
  add_bilinear(Q, 0, 0, Z.transpose() * gm.lpp * Z, 0.5);
  if (m > 0) {
    add_bilinear(Q, L.h(), L.xi(N), gm.HvxT, 1.0);
    add_bilinear(Q, L.h(), L.h(), gm.ST, 0.5);
  }
  for (int k = 0; k <= N; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    add_bilinear(Q, L.xi(k), L.xi(k), gm.H.Hxx[kk], 0.5 * w(k));
    if (l > 0) {
      add_bilinear(Q, L.u(k), L.xi(k), gm.H.Hux[kk], w(k));
      add_bilinear(Q, L.u(k), L.u(k), gm.H.Huu[kk], 0.5 * w(k));
    }
    if (m > 0) {
      add_bilinear(Q, L.y(k), L.xi(k), gm.M[kk], w(k));
      add_bilinear(Q, L.y(k), L.y(k), gm.R[kk], 0.5 * w(k));
      if (l > 0) add_bilinear(Q, L.y(k), L.u(k), gm.E[kk], w(k));
    }
  }

  VectorXd Gd = VectorXd::Zero(D);
  Gd.segment(L.xi(0), n).setOnes();
  for (int k = 0; k <= N; ++k) {
    Gd.segment(L.u(k), l).setConstant(w(k));
    Gd.segment(L.y(k), m).setConstant(w(k));
  }
  Gd.segment(L.h(), m).setOnes();

  Eigen::JacobiSVD<MatrixXd> svd(C, Eigen::ComputeFullV);
  const VectorXd sv = svd.singularValues();
  const double thr = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) rank += sv(i) > thr ? 1 : 0;
  const MatrixXd Nb = svd.matrixV().rightCols(D - rank);

  OracleResult out;
  out.null_dim = static_cast<int>(Nb.cols());
  if (Nb.cols() == 0) return out;
  const MatrixXd A = Nb.transpose() * Q * Nb;
  const MatrixXd Bm = Nb.transpose() * Gd.asDiagonal() * Nb;
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> es(0.5 * (A + A.transpose()), 0.5 * (Bm + Bm.transpose()),
                                                        Eigen::EigenvaluesOnly);
  out.min_eig = es.eigenvalues().minCoeff();
  return out;
}

}  // namespace socv::test
