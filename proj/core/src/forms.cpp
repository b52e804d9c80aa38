#include "socv/forms.hpp"

#include <cmath>
#include <limits>

#include "socv/errors.hpp"
#include "socv/numdiff.hpp"

namespace socv {

namespace {

void check_nodes(const GohMatrices& gm, const MatrixXd& A, const char* what) {
  if (A.rows() != gm.grid.nodes()) {
    throw DimensionError(std::string(what) + " has " + std::to_string(A.rows()) + " rows, grid has " +
                         std::to_string(gm.grid.nodes()) + " nodes");
  }
}

double endpoint_quadratic(const MatrixXd& lpp, const VectorXd& a, const VectorXd& b) {
  VectorXd z(a.size() + b.size());
  z << a, b;
  return 0.5 * z.dot(lpp * z);
}

QuadraticEvaluation finish(std::map<std::string, double> parts) {
  QuadraticEvaluation q;
  for (const auto& [k, v] : parts) q.value += v;
  q.breakdown = std::move(parts);
  return q;
}

}  // namespace

double lagrangian_value(const ProblemDef& p, const Trajectory& w, const Multiplier& lambda) {
  const Grid& g = w.grid;
  if (lambda.p.rows() != g.nodes()) throw DimensionError("lagrangian_value: costate grid mismatch");
  const VectorXd x0 = w.x.row(0).transpose();
  const VectorXd xT = w.x.row(g.N).transpose();
  const VectorXd c = lambda.coefficients();
  double ell = 0.0;
  for (int e = 0; e < p.endpoint_count(); ++e) {
    if (c[e] != 0.0) ell += c[e] * eval_endpoint(p, e, x0, xT, 0).value;
  }
  const MatrixXd xdot = time_derivative_rows(w.x, g.h());
  const VectorXd wts = g.weights();
  double integral = 0.0;
  for (int k = 0; k < g.nodes(); ++k) {
    const VectorXd F = eval_dynamics(p, w.x.row(k).transpose(), w.u.row(k).transpose(), w.v.row(k).transpose());
    integral += wts[k] * lambda.p.row(k).dot(F.transpose() - xdot.row(k));
  }
  return ell + integral;
}

QuadraticEvaluation omega(const GohMatrices& gm, const Direction& dir) {
  check_nodes(gm, dir.x, "direction state");
  check_nodes(gm, dir.u, "direction u");
  check_nodes(gm, dir.v, "direction v");
  const int N = gm.grid.N;
  const VectorXd w = gm.grid.weights();
  std::map<std::string, double> t{{"endpoint", 0.0}, {"Hxx", 0.0}, {"Hux", 0.0},
                                  {"Hvx", 0.0},      {"Huu", 0.0}, {"Hvu", 0.0}};
  t["endpoint"] = endpoint_quadratic(gm.lpp, dir.x.row(0).transpose(), dir.x.row(N).transpose());
  for (int k = 0; k <= N; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const VectorXd x = dir.x.row(k).transpose();
    const VectorXd u = dir.u.row(k).transpose();
    const VectorXd v = dir.v.row(k).transpose();
    t["Hxx"] += w[k] * 0.5 * x.dot(gm.H.Hxx[kk] * x);
    if (gm.l > 0) {
      t["Hux"] += w[k] * u.dot(gm.H.Hux[kk] * x);
      t["Huu"] += w[k] * 0.5 * u.dot(gm.H.Huu[kk] * u);
    }
    if (gm.m > 0) {
      t["Hvx"] += w[k] * v.dot(gm.H.Hvx[kk] * x);
      if (gm.l > 0) t["Hvu"] += w[k] * v.dot(gm.H.Hvu[kk] * u);
    }
  }
  return finish(std::move(t));
}

double boundary_form(const GohMatrices& gm, const VectorXd& xi0, const VectorXd& xiT, const VectorXd& h) {
  double g = endpoint_quadratic(gm.lpp, xi0, xiT + gm.FvT * h);
  if (gm.m > 0) g += h.dot(gm.HvxT * xiT + 0.5 * gm.ST * h);
  return g;
}

namespace {

std::map<std::string, double> transformed_terms(const GohMatrices& gm, const GohDirection& g) {
  check_nodes(gm, g.xi, "transformed state");
  check_nodes(gm, g.u, "direction u");
  check_nodes(gm, g.y, "direction y");
  const int N = gm.grid.N;
  const VectorXd w = gm.grid.weights();
  std::map<std::string, double> t{{"endpoint", 0.0}, {"Hxx", 0.0}, {"Hux", 0.0}, {"M", 0.0},
                                  {"Huu", 0.0},      {"E", 0.0},   {"R", 0.0}};
  t["endpoint"] = boundary_form(gm, g.xi.row(0).transpose(), g.xi.row(N).transpose(), g.h);
  for (int k = 0; k <= N; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const VectorXd xi = g.xi.row(k).transpose();
    const VectorXd u = g.u.row(k).transpose();
    const VectorXd y = g.y.row(k).transpose();
    t["Hxx"] += w[k] * 0.5 * xi.dot(gm.H.Hxx[kk] * xi);
    if (gm.l > 0) {
      t["Hux"] += w[k] * u.dot(gm.H.Hux[kk] * xi);
      t["Huu"] += w[k] * 0.5 * u.dot(gm.H.Huu[kk] * u);
    }
    if (gm.m > 0) {
      t["M"] += w[k] * y.dot(gm.M[kk] * xi);
      t["R"] += w[k] * 0.5 * y.dot(gm.R[kk] * y);
      if (gm.l > 0) t["E"] += w[k] * y.dot(gm.E[kk] * u);
    }
  }
  return t;
}

}  // namespace

QuadraticEvaluation omega_P(const GohMatrices& gm, const ClassFlags& flags, const GohDirection& g,
                            const MatrixXd& v) {
  if (!flags.in_co_lambda_sharp) {
    throw FormRefused("omega_P needs H_uu >= 0 and H_vu = 0 (min eig H_uu = " +
                      std::to_string(flags.min_eig_Huu) + ", max |H_vu| = " + std::to_string(flags.max_abs_Hvu) +
                      ")");
  }
  check_nodes(gm, v, "direction v");
  auto t = transformed_terms(gm, g);
  double gterm = 0.0;
  if (gm.m > 0) {
    const VectorXd w = gm.grid.weights();
    for (int k = 0; k <= gm.grid.N; ++k) {
      gterm += w[k] * v.row(k).dot((gm.G[static_cast<std::size_t>(k)] * g.y.row(k).transpose()).transpose());
    }
  }
  t["G"] = gterm;
  return finish(std::move(t));
}

QuadraticEvaluation omega_P2(const GohMatrices& gm, const ClassFlags& flags, const GohDirection& g) {
  if (!flags.in_G_co_lambda_sharp) {
    throw FormRefused("omega_P2 needs a multiplier with H_uu >= 0, H_vu = 0 and G = 0 (max |G| = " +
                      std::to_string(flags.max_abs_G) + ")");
  }
  return finish(transformed_terms(gm, g));
}

ProbeResult expansion_probe(const ProblemDef& p, const Trajectory& traj, const Multiplier& lambda,
                            const Perturbation& dw, const std::vector<double>& sigmas) {
  const Grid& grid = traj.grid;
  const LinearizedSystem lin = linearize(p, traj);
  const GohMatrices gm = goh_matrices(p, lin, traj, lambda);
  const Direction dir = integrate_linearized(lin, dw.x0, dw.u, dw.v);

  ProbeResult out;
  out.omega = omega(gm, dir).value;
  const double L0 = lagrangian_value(p, traj, lambda);
  const VectorXd x0 = traj.x.row(0).transpose();
  double worst_rel = 0.0;
  for (double s : sigmas) {
    Trajectory ws;
    try {
      ws = integrate_state(p, x0 + s * dw.x0, traj.u + s * dw.u, traj.v + s * dw.v, grid);
    } catch (const IntegrationDiverged& e) {
      out.warnings.push_back("sigma " + std::to_string(s) + " diverged at node " + std::to_string(e.node()) +
                             "; dropped");
      continue;
    }
    const double dL = lagrangian_value(p, ws, lambda) - L0;
    const double r = dL - s * s * out.omega;
    out.sigmas.push_back(s);
    out.delta_L.push_back(dL);
    out.remainders.push_back(r);
    const double denom = s * s * std::abs(out.omega);
    worst_rel = std::max(worst_rel, denom > 0.0 ? std::abs(r) / denom : std::numeric_limits<double>::infinity());
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < out.sigmas.size(); ++i) {
    if (out.remainders[i] != 0.0) {
      lx.push_back(std::log(out.sigmas[i]));
      ly.push_back(std::log(std::abs(out.remainders[i])));
    }
  }
  if (lx.size() < 2) {
    out.zero_remainder = lx.empty();
    out.slope = std::numeric_limits<double>::quiet_NaN();
    if (!out.zero_remainder) out.warnings.push_back("fewer than two nonzero remainders; slope undefined");
    return out;
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / n;
    my += ly[i] / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  out.slope = sxy / sxx;
  out.quadrature_limited = worst_rel < 1e-5;
  return out;
}

}  // namespace socv
