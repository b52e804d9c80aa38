#include "socv/goh.hpp"

#include <cmath>

#include "json.hpp"
#include "socv/errors.hpp"
#include "socv/numdiff.hpp"
#include "socv/parallel.hpp"

namespace socv {

namespace {

std::vector<FieldEval> eval_all_fields(const ProblemDef& p, const VectorXd& x, const VectorXd& u,
                                       int order) {
  std::vector<FieldEval> out;
  out.reserve(static_cast<std::size_t>(p.m + 1));
  for (int i = 0; i <= p.m; ++i) out.push_back(eval_field(p, i, x, u, order));
  return out;
}

// T[w](a, c) = sum_b d2 f_a / dx_b dx_c * w_b, i.e. D_x((D_x f) w) with w frozen.
MatrixXd hess_contract(const std::vector<MatrixXd>& hxx, const VectorXd& w) {
  const int n = static_cast<int>(hxx.size());
  MatrixXd T(n, w.size());
  for (int a = 0; a < n; ++a) T.row(a) = (hxx[static_cast<std::size_t>(a)] * w).transpose();
  return T;
}

}  // namespace

HBlocks h_blocks(const ProblemDef& p, const Trajectory& traj, const Multiplier& lambda) {
  const int nodes = traj.grid.nodes();
  if (lambda.p.rows() != nodes || lambda.p.cols() != p.n) {
    throw DimensionError("h_blocks: costate does not match the grid");
  }
  const auto sz = static_cast<std::size_t>(nodes);
  HBlocks H;
  H.Hx.resize(sz); H.Hu.resize(sz); H.Hv.resize(sz);
  H.Hxx.resize(sz); H.Hux.resize(sz); H.Hvx.resize(sz); H.Huu.resize(sz); H.Hvu.resize(sz);
  parallel_for(0, nodes, [&](int k) {
    const auto kk = static_cast<std::size_t>(k);
    const VectorXd x = traj.x.row(k).transpose();
    const VectorXd u = traj.u.row(k).transpose();
    const VectorXd pk = lambda.p.row(k).transpose();
    const auto f = eval_all_fields(p, x, u, 2);
    MatrixXd Fx = f[0].jac_x, Fu = f[0].jac_u;
    MatrixXd Hxx = MatrixXd::Zero(p.n, p.n), Hxu = MatrixXd::Zero(p.n, p.l), Huu = MatrixXd::Zero(p.l, p.l);
    MatrixXd Hvx(p.m, p.n), Hvu(p.m, p.l);
    VectorXd Hv(p.m);
    for (int i = 0; i <= p.m; ++i) {
      const double wi = i == 0 ? 1.0 : traj.v(k, i - 1);
      const FieldEval& fi = f[static_cast<std::size_t>(i)];
      if (i > 0) {
        Fx += wi * fi.jac_x;
        Fu += wi * fi.jac_u;
        Hvx.row(i - 1) = pk.transpose() * fi.jac_x;
        Hvu.row(i - 1) = pk.transpose() * fi.jac_u;
        Hv[i - 1] = pk.dot(fi.value);
      }
      for (int c = 0; c < p.n; ++c) {
        const double w = wi * pk[c];
        if (w == 0.0) continue;
        const auto cc = static_cast<std::size_t>(c);
        Hxx += w * fi.hess_xx[cc];
        Hxu += w * fi.hess_xu[cc];
        Huu += w * fi.hess_uu[cc];
      }
    }
    H.Hx[kk] = Fx.transpose() * pk;
    H.Hu[kk] = Fu.transpose() * pk;
    H.Hv[kk] = Hv;
    H.Hxx[kk] = 0.5 * (Hxx + Hxx.transpose());
    H.Hux[kk] = Hxu.transpose();
    H.Huu[kk] = 0.5 * (Huu + Huu.transpose());
    H.Hvx[kk] = Hvx;
    H.Hvu[kk] = Hvu;
  });
  return H;
}

double GohMatrices::max_abs_G() const {
  double g = 0.0;
  if (m == 0) return g;
  for (const auto& Gk : G) g = std::max(g, Gk.cwiseAbs().maxCoeff());
  return g;
}

GohMatrices goh_matrices(const ProblemDef& p, const LinearizedSystem& lin, const Trajectory& traj,
                         const Multiplier& lambda) {
  GohMatrices gm;
  gm.grid = lin.grid;
  gm.n = p.n;
  gm.l = p.l;
  gm.m = p.m;
  gm.Fx = lin.Fx;
  gm.Fu = lin.Fu;
  gm.Fv = lin.Fv;
  gm.H = h_blocks(p, traj, lambda);
  gm.B = goh_b_matrix(lin);

  const double h = lin.grid.h();
  const auto sz = static_cast<std::size_t>(lin.grid.nodes());
  const auto dHvx = time_derivative(gm.H.Hvx, h);
  gm.M.resize(sz); gm.E.resize(sz); gm.S.resize(sz); gm.G.resize(sz); gm.R.resize(sz);
  for (std::size_t k = 0; k < sz; ++k) {
    const MatrixXd& Fv = lin.Fv[k];
    const MatrixXd& Hvx = gm.H.Hvx[k];
    gm.M[k] = Fv.transpose() * gm.H.Hxx[k] - dHvx[k] - Hvx * lin.Fx[k];
    gm.E[k] = Fv.transpose() * gm.H.Hux[k].transpose() - Hvx * lin.Fu[k];
    const MatrixXd HF = Hvx * Fv;
    gm.S[k] = 0.5 * (HF + HF.transpose());
    gm.G[k] = 0.5 * (HF - HF.transpose());
  }
  const auto dS = time_derivative(gm.S, h);
  for (std::size_t k = 0; k < sz; ++k) {
    const MatrixXd HB = gm.H.Hvx[k] * gm.B[k];
    const MatrixXd R = lin.Fv[k].transpose() * gm.H.Hxx[k] * lin.Fv[k] - (HB + HB.transpose()) - dS[k];
    gm.R[k] = 0.5 * (R + R.transpose());
  }

  const std::size_t last = sz - 1;
  gm.HvxT = gm.H.Hvx[last];
  gm.ST = gm.S[last];
  gm.FvT = lin.Fv[last];
  const VectorXd x0 = traj.x.row(0).transpose();
  const VectorXd xT = traj.x.row(lin.grid.N).transpose();
  gm.lpp = MatrixXd::Zero(2 * p.n, 2 * p.n);
  const VectorXd coef = lambda.coefficients();
  for (int e = 0; e < p.endpoint_count(); ++e) {
    if (coef[e] == 0.0) continue;
    gm.lpp += coef[e] * eval_endpoint(p, e, x0, xT, 2).hessian;
  }
  gm.lpp = 0.5 * (gm.lpp + gm.lpp.transpose());
  return gm;
}

GohMatrices goh_matrices(const ProblemDef& p, const Trajectory& traj, const Multiplier& lambda) {
  return goh_matrices(p, linearize(p, traj), traj, lambda);
}

VectorXd lie_bracket_x(const ProblemDef& p, int i, int j, const VectorXd& x, const VectorXd& u) {
  const FieldEval fi = eval_field(p, i, x, u, 1);
  const FieldEval fj = eval_field(p, j, x, u, 1);
  return fi.jac_x * fj.value - fj.jac_x * fi.value;
}

std::vector<MatrixXd> r_bracket(const ProblemDef& p, const LinearizedSystem& lin,
                                const Trajectory& traj, const Multiplier& lambda) {
  const int nodes = lin.grid.nodes();
  std::vector<MatrixXd> R(static_cast<std::size_t>(nodes));
  parallel_for(0, nodes, [&](int k) {
    const VectorXd x = traj.x.row(k).transpose();
    const VectorXd u = traj.u.row(k).transpose();
    const VectorXd ud = lin.udot.row(k).transpose();
    const VectorXd pk = lambda.p.row(k).transpose();
    const auto f = eval_all_fields(p, x, u, 2);

    // F = f0 + sum v_i f_i with v frozen: value, Jacobian, Hessian slices.
    VectorXd F = f[0].value;
    MatrixXd DF = f[0].jac_x;
    std::vector<MatrixXd> HF = f[0].hess_xx;
    for (int i = 1; i <= p.m; ++i) {
      const double vi = traj.v(k, i - 1);
      const FieldEval& fi = f[static_cast<std::size_t>(i)];
      F += vi * fi.value;
      DF += vi * fi.jac_x;
      for (int c = 0; c < p.n; ++c) HF[static_cast<std::size_t>(c)] += vi * fi.hess_xx[static_cast<std::size_t>(c)];
    }

    MatrixXd Rk(p.m, p.m);
    for (int i = 1; i <= p.m; ++i) {
      const FieldEval& fi = f[static_cast<std::size_t>(i)];
      // b_i and its x-Jacobian.
      VectorXd b = DF * fi.value - fi.jac_x * F;
      MatrixXd Db = hess_contract(HF, fi.value) + DF * fi.jac_x - hess_contract(fi.hess_xx, F) - fi.jac_x * DF;
      if (p.l > 0) {
        b -= fi.jac_u * ud;
        for (int a = 0; a < p.n; ++a) Db.row(a) -= (fi.hess_xu[static_cast<std::size_t>(a)] * ud).transpose();
      }
      for (int j = 1; j <= p.m; ++j) {
        const FieldEval& fj = f[static_cast<std::size_t>(j)];
        const VectorXd br = fj.jac_x * b - Db * fj.value;
        Rk(i - 1, j - 1) = -pk.dot(br);
      }
    }
    R[static_cast<std::size_t>(k)] = Rk;
  });
  return R;
}

RCrossCheck r_cross_check(const ProblemDef& p, const Trajectory& traj, const Multiplier& lambda,
                          const GohMatrices& gm, double tol) {
  RCrossCheck out;
  out.max_abs_G = gm.max_abs_G();
  if (out.max_abs_G > tol) return out;
  out.applicable = true;
  const LinearizedSystem lin = linearize(p, traj);
  const auto Rb = r_bracket(p, lin, traj, lambda);
  for (std::size_t k = 0; k < Rb.size(); ++k) {
    if (p.m == 0) break;
    out.max_deviation = std::max(out.max_deviation, (gm.R[k] - Rb[k]).cwiseAbs().maxCoeff());
  }
  return out;
}

namespace {

nlohmann::json mat_json(const MatrixXd& A) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < A.cols(); ++c) row.push_back(A(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json series_json(const std::vector<MatrixXd>& s) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& A : s) out.push_back(mat_json(A));
  return out;
}

}  // namespace

std::string goh_matrices_json(const GohMatrices& gm, int indent) {
  nlohmann::json j;
  j["N"] = gm.grid.N;
  j["T"] = gm.grid.T;
  j["n"] = gm.n;
  j["l"] = gm.l;
  j["m"] = gm.m;
  nlohmann::json t = nlohmann::json::array();
  for (int k = 0; k <= gm.grid.N; ++k) t.push_back(gm.grid.t(k));
  j["t"] = std::move(t);
  j["Fx"] = series_json(gm.Fx);
  j["Fu"] = series_json(gm.Fu);
  j["Fv"] = series_json(gm.Fv);
  j["Hxx"] = series_json(gm.H.Hxx);
  j["Hux"] = series_json(gm.H.Hux);
  j["Hvx"] = series_json(gm.H.Hvx);
  j["Huu"] = series_json(gm.H.Huu);
  j["Hvu"] = series_json(gm.H.Hvu);
  j["B"] = series_json(gm.B);
  j["M"] = series_json(gm.M);
  j["E"] = series_json(gm.E);
  j["S"] = series_json(gm.S);
  j["G"] = series_json(gm.G);
  j["R"] = series_json(gm.R);
  j["boundary"] = {{"Hvx_T", mat_json(gm.HvxT)}, {"S_T", mat_json(gm.ST)}, {"Fv_T", mat_json(gm.FvT)},
                   {"lpp", mat_json(gm.lpp)}};
  return j.dump(indent);
}

}  // namespace socv
