#include "socv/cone.hpp"

#include <cmath>

#include <Eigen/QR>

#include "socv/errors.hpp"
#include "socv/parallel.hpp"

namespace socv {

VectorXd DiscretizedCone::pack(const GohDirection& g) const {
  VectorXd z(dim());
  z.head(n) = g.xi0;
  for (int k = 0; k < grid.nodes(); ++k) {
    for (int i = 0; i < l; ++i) z[u_index(k, i)] = g.u(k, i);
    for (int i = 0; i < m; ++i) z[y_index(k, i)] = g.y(k, i);
  }
  for (int i = 0; i < m; ++i) z[h_index(i)] = g.h[i];
  return z;
}

GohDirection DiscretizedCone::unpack(const VectorXd& z) const {
  if (z.size() != dim()) throw DimensionError("cone vector has the wrong length");
  GohDirection g;
  g.xi0 = z.head(n);
  g.u.resize(grid.nodes(), l);
  g.y.resize(grid.nodes(), m);
  g.h.resize(m);
  for (int k = 0; k < grid.nodes(); ++k) {
    for (int i = 0; i < l; ++i) g.u(k, i) = z[u_index(k, i)];
    for (int i = 0; i < m; ++i) g.y(k, i) = z[y_index(k, i)];
  }
  for (int i = 0; i < m; ++i) g.h[i] = z[h_index(i)];
  MatrixXd w(grid.nodes(), l + m);
  w << g.u, g.y;
  g.xi = prop.forward(g.xi0, w);
  return g;
}

VectorXd DiscretizedCone::gamma_diag() const {
  VectorXd d = VectorXd::Ones(dim());
  const VectorXd w = grid.weights();
  for (int k = 0; k < grid.nodes(); ++k) {
    for (int i = 0; i < l; ++i) d[u_index(k, i)] = w[k];
    for (int i = 0; i < m; ++i) d[y_index(k, i)] = w[k];
  }
  return d;
}

double DiscretizedCone::gamma(const VectorXd& z) const {
  return z.dot(gamma_diag().cwiseProduct(z));
}

bool DiscretizedCone::inequalities_trivial(double eps) const {
  if (A_in.rows() == 0 || A_in.cwiseAbs().maxCoeff() <= eps) return true;
  if (A_eq.rows() == 0) return false;
  // Rows in the span of the equality rows are constant (zero) on the subspace.
  const Eigen::ColPivHouseholderQR<MatrixXd> qr(A_eq.transpose());
  for (Eigen::Index i = 0; i < A_in.rows(); ++i) {
    const VectorXd row = A_in.row(i).transpose();
    const VectorXd res = A_eq.transpose() * qr.solve(row) - row;
    if (res.cwiseAbs().maxCoeff() > eps * std::max(1.0, row.cwiseAbs().maxCoeff())) return false;
  }
  return true;
}

DiscretizedCone build_cone(const ProblemDef& p, const Trajectory& traj, const LinearizedSystem& lin,
                           double active_tol) {
  DiscretizedCone c;
  c.grid = lin.grid;
  c.n = p.n;
  c.l = p.l;
  c.m = p.m;
  c.prop = goh_propagator(lin, goh_b_matrix(lin));

  const int N = c.grid.N;
  const VectorXd x0 = traj.x.row(0).transpose();
  const VectorXd xT = traj.x.row(N).transpose();
  const MatrixXd& FvT = lin.Fv[static_cast<std::size_t>(N)];

  // Row of a linearized endpoint map with gradient (g0, gT).
  auto row_for = [&](int which) {
    const VectorXd g = eval_endpoint(p, which, x0, xT, 1).gradient;
    MatrixXd seed = MatrixXd::Zero(c.grid.nodes(), p.n);
    seed.row(N) = g.tail(p.n).transpose();
    VectorXd d0;
    MatrixXd dw;
    c.prop.adjoint(seed, d0, dw);
    VectorXd r(c.dim());
    r.head(p.n) = g.head(p.n) + d0;
    for (int k = 0; k < c.grid.nodes(); ++k) {
      for (int i = 0; i < p.l; ++i) r[c.u_index(k, i)] = dw(k, i);
      for (int i = 0; i < p.m; ++i) r[c.y_index(k, i)] = dw(k, p.l + i);
    }
    if (p.m > 0) r.tail(p.m) = FvT.transpose() * g.tail(p.n);
    return r;
  };

  c.A_eq.resize(p.d_eta(), c.dim());
  for (int j = 0; j < p.d_eta(); ++j) c.A_eq.row(j) = row_for(1 + p.d_phi() + j).transpose();

  for (int i = 0; i < p.d_phi(); ++i) {
    if (std::abs(eval_endpoint(p, 1 + i, x0, xT, 0).value) <= active_tol) c.active_inequalities.push_back(i);
  }
  c.A_in.resize(1 + static_cast<int>(c.active_inequalities.size()), c.dim());
  c.A_in.row(0) = row_for(0).transpose();
  for (std::size_t r = 0; r < c.active_inequalities.size(); ++r) {
    c.A_in.row(static_cast<int>(r) + 1) = row_for(1 + c.active_inequalities[r]).transpose();
  }
  return c;
}

VectorXd apply_omega_P2(const DiscretizedCone& c, const GohMatrices& gm, const VectorXd& z) {
  const GohDirection g = c.unpack(z);
  const int N = c.grid.N;
  const int n = c.n, l = c.l, m = c.m;
  const VectorXd w = c.grid.weights();

  // Boundary form g = 1/2 zeta^T L zeta + h^T (HvxT xiT + 1/2 ST h), zeta = (xi0, xiT + FvT h).
  const VectorXd xiT = g.xi.row(N).transpose();
  VectorXd zeta(2 * n);
  zeta << g.xi0, xiT + (m > 0 ? VectorXd(gm.FvT * g.h) : VectorXd::Zero(n));
  const VectorXd a = gm.lpp * zeta;

  MatrixXd gx(c.grid.nodes(), n);
  VectorXd grad = VectorXd::Zero(c.dim());
  for (int k = 0; k <= N; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const VectorXd xi = g.xi.row(k).transpose();
    const VectorXd u = g.u.row(k).transpose();
    const VectorXd y = g.y.row(k).transpose();
    VectorXd gxi = gm.H.Hxx[kk] * xi;
    if (l > 0) {
      gxi += gm.H.Hux[kk].transpose() * u;
      const VectorXd gu = gm.H.Hux[kk] * xi + gm.H.Huu[kk] * u + (m > 0 ? VectorXd(gm.E[kk].transpose() * y) : VectorXd::Zero(l));
      for (int i = 0; i < l; ++i) grad[c.u_index(k, i)] = w[k] * gu[i];
    }
    if (m > 0) {
      gxi += gm.M[kk].transpose() * y;
      VectorXd gy = gm.M[kk] * xi + gm.R[kk] * y;
      if (l > 0) gy += gm.E[kk] * u;
      for (int i = 0; i < m; ++i) grad[c.y_index(k, i)] = w[k] * gy[i];
    }
    gx.row(k) = w[k] * gxi.transpose();
  }
  gx.row(0) += a.head(n).transpose();
  gx.row(N) += a.tail(n).transpose();
  if (m > 0) {
    gx.row(N) += (gm.HvxT.transpose() * g.h).transpose();
    grad.tail(m) = gm.FvT.transpose() * a.tail(n) + gm.HvxT * xiT + gm.ST * g.h;
  }

  VectorXd d0;
  MatrixXd dw;
  c.prop.adjoint(gx, d0, dw);
  grad.head(n) += d0;
  for (int k = 0; k <= N; ++k) {
    for (int i = 0; i < l; ++i) grad[c.u_index(k, i)] += dw(k, i);
    for (int i = 0; i < m; ++i) grad[c.y_index(k, i)] += dw(k, l + i);
  }
  // grad is the gradient of Omega_P2 = z^T Q z, i.e. 2 Q z.
  return 0.5 * grad;
}

double omega_P2_value(const DiscretizedCone& cone, const GohMatrices& gm, const VectorXd& z) {
  return z.dot(apply_omega_P2(cone, gm, z));
}

MatrixXd assemble_omega_P2(const DiscretizedCone& cone, const GohMatrices& gm) {
  const int d = cone.dim();
  MatrixXd Q(d, d);
  parallel_for(0, d, [&](int j) {
    VectorXd e = VectorXd::Zero(d);
    e[j] = 1.0;
    Q.col(j) = apply_omega_P2(cone, gm, e);
  });
  return 0.5 * (Q + Q.transpose());
}

}  // namespace socv
