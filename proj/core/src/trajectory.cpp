#include "socv/trajectory.hpp"

#include <cmath>

#include "socv/errors.hpp"
#include "socv/numdiff.hpp"

namespace socv {

Grid Grid::make(double T, int N) {
  if (N < 2) throw DomainError("grid needs N >= 2, got " + std::to_string(N));
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("grid horizon must be positive");
  return Grid{N, T};
}

VectorXd Grid::times() const {
  VectorXd t(N + 1);
  for (int k = 0; k <= N; ++k) t[k] = this->t(k);
  return t;
}

VectorXd Grid::weights() const { return trapezoid_weights(N, h()); }

namespace {

void check_controls(const ProblemDef& p, const MatrixXd& u, const MatrixXd& v, const Grid& grid) {
  if (u.rows() != grid.nodes() || u.cols() != p.l || v.rows() != grid.nodes() || v.cols() != p.m) {
    throw DimensionError("control samples do not match the grid and problem dimensions");
  }
}

VectorXd rk4_step(const ProblemDef& p, double h, const VectorXd& x, const VectorXd& u0,
                  const VectorXd& u1, const VectorXd& v0, const VectorXd& v1) {
  const VectorXd um = 0.5 * (u0 + u1);
  const VectorXd vm = 0.5 * (v0 + v1);
  const VectorXd k1 = eval_dynamics(p, x, u0, v0);
  const VectorXd k2 = eval_dynamics(p, x + 0.5 * h * k1, um, vm);
  const VectorXd k3 = eval_dynamics(p, x + 0.5 * h * k2, um, vm);
  const VectorXd k4 = eval_dynamics(p, x + h * k3, u1, v1);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory integrate_state(const ProblemDef& p, const VectorXd& x0, const MatrixXd& u,
                           const MatrixXd& v, const Grid& grid) {
  if (x0.size() != p.n) throw DimensionError("integrate_state: x0 has wrong size");
  check_controls(p, u, v, grid);
  Trajectory tr{grid, MatrixXd(grid.nodes(), p.n), u, v};
  tr.x.row(0) = x0.transpose();
  VectorXd x = x0;
  for (int k = 0; k < grid.N; ++k) {
    x = rk4_step(p, grid.h(), x, u.row(k).transpose(), u.row(k + 1).transpose(),
                 v.row(k).transpose(), v.row(k + 1).transpose());
    if (!x.allFinite()) throw IntegrationDiverged("state integration diverged", k + 1);
    tr.x.row(k + 1) = x.transpose();
  }
  return tr;
}

Trajectory reference_trajectory(const ProblemDef& p, const Grid& grid) {
  const VectorXd x0 = p.reference_x0.size() == p.n ? p.reference_x0 : VectorXd::Zero(p.n);
  return integrate_state(p, x0, MatrixXd::Zero(grid.nodes(), p.l), MatrixXd::Zero(grid.nodes(), p.m),
                         grid);
}

FeasibilityReport feasibility_report(const ProblemDef& p, const Trajectory& traj, double tol) {
  const Grid& g = traj.grid;
  if (traj.x.rows() != g.nodes() || traj.x.cols() != p.n) {
    throw DimensionError("feasibility_report: state samples do not match the grid");
  }
  check_controls(p, traj.u, traj.v, g);
  FeasibilityReport r;
  for (int k = 0; k < g.N; ++k) {
    const VectorXd next = rk4_step(p, g.h(), traj.x.row(k).transpose(), traj.u.row(k).transpose(),
                                   traj.u.row(k + 1).transpose(), traj.v.row(k).transpose(),
                                   traj.v.row(k + 1).transpose());
    const double d = (next - traj.x.row(k + 1).transpose()).lpNorm<Eigen::Infinity>();
    if (!(d <= r.max_defect)) {
      r.max_defect = d;
      r.worst_step = k;
    }
  }
  const VectorXd x0 = traj.x.row(0).transpose();
  const VectorXd xT = traj.x.row(g.N).transpose();
  r.cost = eval_endpoint(p, 0, x0, xT, 0).value;
  r.phi.resize(p.d_phi());
  r.active.resize(static_cast<std::size_t>(p.d_phi()));
  for (int i = 0; i < p.d_phi(); ++i) {
    r.phi[i] = eval_endpoint(p, 1 + i, x0, xT, 0).value;
    r.active[static_cast<std::size_t>(i)] = std::abs(r.phi[i]) <= tol;
    r.max_phi = std::max(r.max_phi, r.phi[i]);
  }
  r.eta.resize(p.d_eta());
  for (int j = 0; j < p.d_eta(); ++j) {
    r.eta[j] = eval_endpoint(p, 1 + p.d_phi() + j, x0, xT, 0).value;
    r.max_eta = std::max(r.max_eta, std::abs(r.eta[j]));
  }
  r.feasible = std::isfinite(r.max_defect) && r.max_defect <= tol && r.max_eta <= tol &&
               r.max_phi <= tol;
  return r;
}

LinearizedSystem linearize(const ProblemDef& p, const Trajectory& traj) {
  const Grid& g = traj.grid;
  check_controls(p, traj.u, traj.v, g);
  LinearizedSystem lin;
  lin.grid = g;
  const auto nodes = static_cast<std::size_t>(g.nodes());
  lin.Fx.resize(nodes);
  lin.Fu.resize(nodes);
  lin.Fv.resize(nodes);
  for (int k = 0; k < g.nodes(); ++k) {
    const VectorXd x = traj.x.row(k).transpose();
    const VectorXd u = traj.u.row(k).transpose();
    FieldEval f0 = eval_field(p, 0, x, u, 1);
    MatrixXd Fx = f0.jac_x;
    MatrixXd Fu = f0.jac_u;
    MatrixXd Fv(p.n, p.m);
    for (int i = 1; i <= p.m; ++i) {
      const FieldEval fi = eval_field(p, i, x, u, 1);
      const double vi = traj.v(k, i - 1);
      Fx += vi * fi.jac_x;
      Fu += vi * fi.jac_u;
      Fv.col(i - 1) = fi.value;
    }
    const auto kk = static_cast<std::size_t>(k);
    lin.Fx[kk] = std::move(Fx);
    lin.Fu[kk] = std::move(Fu);
    lin.Fv[kk] = std::move(Fv);
  }
  lin.udot = time_derivative_rows(traj.u, g.h());
  return lin;
}

LinearPropagator state_propagator(const LinearizedSystem& lin) {
  std::vector<MatrixXd> C(lin.Fx.size());
  for (std::size_t k = 0; k < C.size(); ++k) {
    C[k].resize(lin.Fu[k].rows(), lin.Fu[k].cols() + lin.Fv[k].cols());
    C[k] << lin.Fu[k], lin.Fv[k];
  }
  return LinearPropagator(lin.grid.h(), lin.Fx, C);
}

std::vector<MatrixXd> goh_b_matrix(const LinearizedSystem& lin) {
  const auto dFv = time_derivative(lin.Fv, lin.grid.h());
  std::vector<MatrixXd> B(lin.Fv.size());
  for (std::size_t k = 0; k < B.size(); ++k) B[k] = lin.Fx[k] * lin.Fv[k] - dFv[k];
  return B;
}

LinearPropagator goh_propagator(const LinearizedSystem& lin, const std::vector<MatrixXd>& B) {
  std::vector<MatrixXd> C(lin.Fx.size());
  for (std::size_t k = 0; k < C.size(); ++k) {
    C[k].resize(lin.Fu[k].rows(), lin.Fu[k].cols() + B[k].cols());
    C[k] << lin.Fu[k], B[k];
  }
  return LinearPropagator(lin.grid.h(), lin.Fx, C);
}

Direction integrate_linearized(const LinearPropagator& prop, const VectorXd& x0, const MatrixXd& u,
                               const MatrixXd& v) {
  if (u.rows() != v.rows()) throw DimensionError("integrate_linearized: u and v node counts differ");
  MatrixXd w(u.rows(), u.cols() + v.cols());
  w << u, v;
  Direction d{x0, u, v, prop.forward(x0, w)};
  return d;
}

Direction integrate_linearized(const LinearizedSystem& lin, const VectorXd& x0, const MatrixXd& u,
                               const MatrixXd& v) {
  return integrate_linearized(state_propagator(lin), x0, u, v);
}

MatrixXd integrate_goh_state(const LinearPropagator& goh_prop, const VectorXd& xi0,
                             const MatrixXd& u, const MatrixXd& y) {
  if (u.rows() != y.rows()) throw DimensionError("integrate_goh_state: u and y node counts differ");
  MatrixXd w(u.rows(), u.cols() + y.cols());
  w << u, y;
  return goh_prop.forward(xi0, w);
}

GohDirection goh_transform_direction(const LinearizedSystem& lin, const Direction& dir) {
  const Grid& g = lin.grid;
  const int n = static_cast<int>(dir.x.cols());
  GohDirection out;
  out.u = dir.u;
  out.y = cumulative_trapezoid(dir.v, g.h());
  out.h = out.y.row(g.N).transpose();
  out.xi.resize(g.nodes(), n);
  for (int k = 0; k < g.nodes(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    out.xi.row(k) = dir.x.row(k) - (lin.Fv[kk] * out.y.row(k).transpose()).transpose();
  }
  out.xi0 = out.xi.row(0).transpose();

  const auto B = goh_b_matrix(lin);
  const MatrixXd dxi = time_derivative_rows(out.xi, g.h());
  for (int k = 0; k < g.nodes(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const VectorXd rhs = lin.Fx[kk] * out.xi.row(k).transpose() + lin.Fu[kk] * out.u.row(k).transpose() +
                         B[kk] * out.y.row(k).transpose();
    out.dynamics_residual =
        std::max(out.dynamics_residual, (dxi.row(k).transpose() - rhs).lpNorm<Eigen::Infinity>());
  }
  return out;
}

Direction goh_inverse(const LinearizedSystem& lin, const GohDirection& gd) {
  const Grid& g = lin.grid;
  Direction d;
  d.u = gd.u;
  d.v = time_derivative_rows(gd.y, g.h());
  d.x.resize(gd.xi.rows(), gd.xi.cols());
  for (int k = 0; k < g.nodes(); ++k) {
    d.x.row(k) = gd.xi.row(k) + (lin.Fv[static_cast<std::size_t>(k)] * gd.y.row(k).transpose()).transpose();
  }
  d.x0 = d.x.row(0).transpose();
  return d;
}

double gamma_order(const Grid& grid, const VectorXd& x0, const MatrixXd& u, const MatrixXd& y,
                   const VectorXd& h) {
  const VectorXd w = grid.weights();
  double s = x0.squaredNorm() + h.squaredNorm();
  if (u.cols() > 0) s += w.dot(u.rowwise().squaredNorm());
  if (y.cols() > 0) s += w.dot(y.rowwise().squaredNorm());
  return s;
}

}  // namespace socv
