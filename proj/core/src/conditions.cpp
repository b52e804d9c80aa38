#include "socv/conditions.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "socv/errors.hpp"

namespace socv {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::not_applicable: return "not_applicable";
    case Verdict::blocked: return "blocked";
  }
  return "unknown";
}

const char* to_string(SufficiencyMode m) {
  return m == SufficiencyMode::subspace ? "subspace" : "cone";
}

namespace {

double min_eig(const MatrixXd& A) {
  if (A.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

double max_abs(const MatrixXd& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

std::vector<ConditionEntry> pointwise_report(const GohMatrices& gm, double tol) {
  const int l = gm.l, m = gm.m;
  double lc_min = std::numeric_limits<double>::infinity(), lc_scale = 1.0;
  double g_max = 0.0;
  double goh_min = std::numeric_limits<double>::infinity(), goh_scale = 1.0;
  int lc_node = 0, g_node = 0, goh_node = 0;
  for (int k = 0; k <= gm.grid.N; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    MatrixXd LC = MatrixXd::Zero(l + m, l + m);
    MatrixXd GB = MatrixXd::Zero(l + m, l + m);
    if (l > 0) {
      LC.topLeftCorner(l, l) = gm.H.Huu[kk];
      GB.topLeftCorner(l, l) = gm.H.Huu[kk];
    }
    if (l > 0 && m > 0) {
      LC.bottomLeftCorner(m, l) = gm.H.Hvu[kk];
      LC.topRightCorner(l, m) = gm.H.Hvu[kk].transpose();
      GB.bottomLeftCorner(m, l) = gm.E[kk];
      GB.topRightCorner(l, m) = gm.E[kk].transpose();
    }
    if (m > 0) GB.bottomRightCorner(m, m) = gm.R[kk];
    const double a = min_eig(LC);
    if (a < lc_min) { lc_min = a; lc_node = k; }
    lc_scale = std::max(lc_scale, max_abs(LC));
    if (m > 0) {
      const double g = max_abs(gm.G[kk]);
      if (g > g_max) { g_max = g; g_node = k; }
    }
    const double c = min_eig(GB);
    if (c < goh_min) { goh_min = c; goh_node = k; }
    goh_scale = std::max(goh_scale, max_abs(GB));
  }
  if (l + m == 0) lc_min = goh_min = 0.0;

  std::vector<ConditionEntry> out;
  ConditionEntry a{"legendre_clebsch", "control Hessian [[Huu, Hvu^T], [Hvu, 0]] positive semidefinite at every node",
                   lc_min >= -tol * lc_scale ? Verdict::satisfied : Verdict::violated, lc_min,
                   {{"min_eigenvalue", lc_min}, {"node", lc_node}, {"scale", lc_scale}}, "pointwise_report", ""};
  out.push_back(a);
  ConditionEntry b{"goh_symmetry", "Hvx Fv symmetric at every node (G = 0)",
                   g_max <= tol ? Verdict::satisfied : Verdict::violated, g_max,
                   {{"max_abs_G", g_max}, {"node", g_node}}, "pointwise_report", m < 2 ? "m < 2: G vanishes identically" : ""};
  out.push_back(b);
  ConditionEntry c{"goh_block", "[[Huu, E^T], [E, R]] positive semidefinite at every node",
                   goh_min >= -tol * goh_scale ? Verdict::satisfied : Verdict::violated, goh_min,
                   {{"min_eigenvalue", goh_min}, {"node", goh_node}, {"scale", goh_scale}}, "pointwise_report", ""};
  out.push_back(c);
  ConditionEntry d{"uniform_positivity", "[[Huu, E^T], [E, R]] >= rho I at every node with rho > 0",
                   goh_min > tol * goh_scale ? Verdict::satisfied : Verdict::inconclusive, goh_min,
                   {{"rho", goh_min}}, "pointwise_report",
                   goh_min > tol * goh_scale ? "" : "no uniform margin; sufficiency rests on the integral test"};
  out.push_back(d);
  return out;
}

std::vector<VertexForm> g_class_vertices(const ProblemDef& p, const Trajectory& traj,
                                         const LinearizedSystem& lin, const MultiplierSet& set,
                                         double tol) {
  std::vector<VertexForm> out;
  for (std::size_t i = 0; i < set.vertices.size(); ++i) {
    const Multiplier& lam = set.vertices[i];
    ClassFlags f = classify_multiplier(p, lin, traj, lam, tol);
    if (!f.in_G_co_lambda_sharp) continue;
    out.push_back(VertexForm{lam, f, goh_matrices(p, lin, traj, lam), static_cast<int>(i)});
  }
  return out;
}

namespace {

// Orthonormal basis of the row space of C (rows as columns).
MatrixXd row_space(const MatrixXd& C) {
  if (C.rows() == 0) return MatrixXd(C.cols(), 0);
  Eigen::ColPivHouseholderQR<MatrixXd> qr(C.transpose());
  qr.setThreshold(1e-10);
  const Eigen::Index r = qr.rank();
  MatrixXd U = MatrixXd::Identity(C.cols(), r);
  return qr.householderQ() * U;
}

// Projection in scaled coordinates s = z / d, d = gamma^(-1/2).
struct Projector {
  VectorXd d;  // gamma^(-1/2)
  MatrixXd U;  // orthonormal basis of the scaled constraint row space

  Projector(const VectorXd& gamma_diag, const MatrixXd& C) : d(gamma_diag.cwiseSqrt().cwiseInverse()) {
    U = row_space(C * d.asDiagonal());
  }
  VectorXd project_scaled(const VectorXd& s) const {
    return U.cols() ? VectorXd(s - U * (U.transpose() * s)) : s;
  }
  int null_dim() const { return static_cast<int>(d.size() - U.cols()); }
};

// Legendre-basis smooth sample on the grid.
MatrixXd smooth_samples(const Grid& g, int cols, std::mt19937_64& rng, int degree = 6) {
  std::normal_distribution<double> gauss;
  MatrixXd out = MatrixXd::Zero(g.nodes(), cols);
  for (int c = 0; c < cols; ++c) {
    std::vector<double> coef(static_cast<std::size_t>(degree + 1));
    for (auto& x : coef) x = gauss(rng);
    for (int k = 0; k < g.nodes(); ++k) {
      const double s = 2.0 * g.t(k) / g.T - 1.0;
      double p0 = 1.0, p1 = s, acc = coef[0];
      if (degree >= 1) acc += coef[1] * p1;
      for (int j = 1; j < degree; ++j) {
        const double p2 = ((2.0 * j + 1.0) * s * p1 - j * p0) / (j + 1.0);
        acc += coef[static_cast<std::size_t>(j + 1)] * p2;
        p0 = p1;
        p1 = p2;
      }
      out(k, c) = acc;
    }
  }
  return out;
}

double max_over_vertices(const DiscretizedCone& cone, const std::vector<VertexForm>& v, const VectorXd& z,
                         int* arg = nullptr) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double val = omega_P2_value(cone, v[i].gm, z);
    if (val > best) {
      best = val;
      if (arg) *arg = static_cast<int>(i);
    }
  }
  return best;
}

// Minimizes the Rayleigh quotient of the scaled operator over the projector's
// null space, starting from s0 (LOBPCG with a single vector).
VectorXd refine_min(const DiscretizedCone& cone, const GohMatrices& gm, const Projector& P, VectorXd s,
                    int iterations) {
  auto A = [&](const VectorXd& x) -> VectorXd {
    return P.d.cwiseProduct(apply_omega_P2(cone, gm, P.d.cwiseProduct(x)));
  };
  s = P.project_scaled(s);
  if (s.norm() == 0.0) return s;
  s.normalize();
  VectorXd prev = VectorXd::Zero(s.size());
  for (int it = 0; it < iterations; ++it) {
    const VectorXd As = A(s);
    const double mu = s.dot(As);
    VectorXd r = P.project_scaled(As - mu * s);
    if (r.norm() <= 1e-12 * std::max(1.0, std::abs(mu))) break;
    MatrixXd V(s.size(), prev.norm() > 0.0 ? 3 : 2);
    V.col(0) = s;
    V.col(1) = r;
    if (V.cols() == 3) V.col(2) = P.project_scaled(prev);
    Eigen::HouseholderQR<MatrixXd> qr(V);
    MatrixXd Qv = qr.householderQ() * MatrixXd::Identity(V.rows(), V.cols());
    // Drop directions that are numerically dependent.
    const MatrixXd Rv = qr.matrixQR().topRows(V.cols()).triangularView<Eigen::Upper>();
    std::vector<int> keep;
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
      if (std::abs(Rv(j, j)) > 1e-10 * std::abs(Rv(0, 0))) keep.push_back(static_cast<int>(j));
    }
    MatrixXd W(V.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) W.col(static_cast<Eigen::Index>(j)) = P.project_scaled(Qv.col(keep[j]));
    Eigen::HouseholderQR<MatrixXd> qr2(W);
    W = qr2.householderQ() * MatrixXd::Identity(W.rows(), W.cols());
    MatrixXd AW(W.rows(), W.cols());
    for (Eigen::Index j = 0; j < W.cols(); ++j) AW.col(j) = A(W.col(j));
    MatrixXd small = W.transpose() * AW;
    small = 0.5 * (small + small.transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(small);
    VectorXd next = W * es.eigenvectors().col(0);
    next.normalize();
    prev = next - s * s.dot(next);
    s = next;
  }
  return s;
}

}  // namespace

NecessityResult necessity_scan(const DiscretizedCone& cone, const std::vector<VertexForm>& vertices,
                               bool vertex_set_exact, int sample_count, std::uint64_t seed, double tol) {
  NecessityResult res;
  res.samples_requested = sample_count;
  res.seed = seed;
  if (vertices.empty()) {
    res.verdict = Verdict::not_applicable;
    res.note = "no multiplier with H_uu >= 0, H_vu = 0 and G = 0; the integral condition says nothing";
    return res;
  }
  const VectorXd gd = cone.gamma_diag();
  const Projector eq(gd, cone.A_eq);
  if (eq.null_dim() == 0) {
    res.verdict = Verdict::satisfied;
    res.vacuous = true;
    res.note = "cone reduces to the zero direction";
    return res;
  }
  const double row_eps = 1e-10;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  double best = std::numeric_limits<double>::infinity();
  VectorXd best_z;
  for (int t = 0; t < sample_count; ++t) {
    GohDirection g;
    g.xi0.resize(cone.n);
    for (int i = 0; i < cone.n; ++i) g.xi0[i] = gauss(rng);
    g.u = smooth_samples(cone.grid, cone.l, rng);
    g.y = smooth_samples(cone.grid, cone.m, rng);
    g.h.resize(cone.m);
    for (int i = 0; i < cone.m; ++i) g.h[i] = gauss(rng);
    VectorXd z = cone.pack(g);
    z = eq.d.cwiseProduct(eq.project_scaled(z.cwiseQuotient(eq.d)));

    // Sign-constrained rows: flip or pin the violated ones.
    VectorXd ain = cone.A_in * z;
    const double scale = std::max(1.0, z.norm());
    if (ain.size() && ain.maxCoeff() > row_eps * scale) {
      if ((-ain).maxCoeff() <= row_eps * scale) {
        z = -z;
      } else {
        std::vector<int> rows;
        for (Eigen::Index i = 0; i < ain.size(); ++i) if (ain[i] > row_eps * scale) rows.push_back(static_cast<int>(i));
        MatrixXd C(cone.A_eq.rows() + static_cast<Eigen::Index>(rows.size()), cone.dim());
        C.topRows(cone.A_eq.rows()) = cone.A_eq;
        for (std::size_t i = 0; i < rows.size(); ++i) C.row(cone.A_eq.rows() + static_cast<Eigen::Index>(i)) = cone.A_in.row(rows[i]);
        const Projector pin(gd, C);
        z = pin.d.cwiseProduct(pin.project_scaled(z.cwiseQuotient(pin.d)));
      }
      ain = cone.A_in * z;
      if (ain.size() && ain.maxCoeff() > row_eps * std::max(1.0, z.norm())) continue;
    }
    const double gam = cone.gamma(z);
    if (!(gam > 0.0)) continue;
    ++res.samples_accepted;
    const double ratio = max_over_vertices(cone, vertices, z) / gam;
    if (ratio < best) {
      best = ratio;
      best_z = z;
    }
  }
  res.sampled_min_ratio = best;
  res.min_ratio = best;

  // Refine the best sample inside the subspace where every sign row is pinned.
  if (best_z.size()) {
    MatrixXd C(cone.A_eq.rows() + cone.A_in.rows(), cone.dim());
    C << cone.A_eq, cone.A_in;
    const Projector sub(gd, C);
    if (sub.null_dim() > 0) {
      int arg = 0;
      max_over_vertices(cone, vertices, best_z, &arg);
      VectorXd s = refine_min(cone, vertices[static_cast<std::size_t>(arg)].gm, sub, best_z.cwiseQuotient(sub.d), 400);
      if (s.norm() > 0.0) {
        const VectorXd z = sub.d.cwiseProduct(s);
        const double ratio = max_over_vertices(cone, vertices, z) / cone.gamma(z);
        if (ratio < best) {
          best = ratio;
          best_z = z;
          res.refined = true;
        }
      }
    }
  }
  res.min_ratio = best;
  if (!best_z.size()) {
    res.verdict = Verdict::inconclusive;
    res.note = "no sample satisfied the sign constraints";
    return res;
  }
  best_z /= std::sqrt(cone.gamma(best_z));
  res.witness = cone.unpack(best_z);
  res.witness_gamma = 1.0;
  res.witness_value = max_over_vertices(cone, vertices, best_z);
  double direct = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) direct = std::max(direct, omega_P2(v.gm, v.flags, res.witness).value);
  res.witness_check = direct;
  if (res.witness_value < -tol) {
    res.verdict = vertex_set_exact ? Verdict::violated : Verdict::inconclusive;
    if (!vertex_set_exact) res.note = "negative value found, but multiplier vertices were sampled";
  } else {
    res.verdict = Verdict::satisfied;
    res.note = "no violation found among sampled directions";
  }
  return res;
}

ReducedSpectrum reduced_min_eig(const MatrixXd& Q, const VectorXd& gamma_diag, const MatrixXd& C,
                                bool want_vector, std::uint64_t seed) {
  const Eigen::Index d = Q.rows();
  const VectorXd dd = gamma_diag.cwiseSqrt().cwiseInverse();
  MatrixXd Qs = dd.asDiagonal() * Q * dd.asDiagonal();
  Eigen::Index r = 0;
  Eigen::ColPivHouseholderQR<MatrixXd> qr;
  if (C.rows() > 0) {
    qr.compute((C * dd.asDiagonal()).transpose());
    qr.setThreshold(1e-10);
    r = qr.rank();
  }
  ReducedSpectrum out;
  out.reduced_dim = static_cast<int>(d - r);
  if (out.reduced_dim == 0) return out;
  if (r > 0) {
    Qs = qr.householderQ().transpose() * Qs;
    Qs = Qs * qr.householderQ();
  }
  MatrixXd Qr = Qs.bottomRightCorner(d - r, d - r);
  Qr = 0.5 * (Qr + Qr.transpose());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(Qr, Eigen::EigenvaluesOnly);
  const VectorXd& ev = es.eigenvalues();
  out.min_eig = ev[0];
  out.norm = std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
  if (!want_vector) return out;

  // Shifted inverse iteration for the lowest eigenvector.
  const double shift = out.min_eig - 1e-6 * std::max(1.0, out.norm);
  MatrixXd S = Qr;
  S.diagonal().array() -= shift;
  Eigen::LDLT<MatrixXd> ldlt(S);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  VectorXd x(d - r);
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = gauss(rng);
  x.normalize();
  for (int it = 0; it < 4; ++it) {
    x = ldlt.solve(x);
    x.normalize();
  }
  VectorXd s = VectorXd::Zero(d);
  s.tail(d - r) = x;
  if (r > 0) s = qr.householderQ() * s;
  out.min_vector = dd.cwiseProduct(s);
  return out;
}

SufficiencyResult sufficiency_check(const DiscretizedCone& cone, const std::vector<VertexForm>& vertices,
                                    bool vertex_set_exact, const SufficiencyOptions& opt) {
  SufficiencyResult res;
  res.mode = opt.mode;
  res.subspace_is_cone = cone.inequalities_trivial();
  if (vertices.empty()) {
    res.verdict = Verdict::not_applicable;
    res.note = "no multiplier with H_uu >= 0, H_vu = 0 and G = 0";
    return res;
  }
  const VectorXd gd = cone.gamma_diag();
  MatrixXd C(cone.A_eq.rows() + cone.A_in.rows(), cone.dim());
  C << cone.A_eq, cone.A_in;

  res.rho_hat = -std::numeric_limits<double>::infinity();
  ReducedSpectrum best;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const MatrixXd Q = assemble_omega_P2(cone, vertices[i].gm);
    ReducedSpectrum rs = reduced_min_eig(Q, gd, C, vertices.size() == 1, opt.seed);
    if (rs.reduced_dim == 0) {
      res.vacuous = true;
      res.verdict = Verdict::satisfied;
      res.rho_hat = std::numeric_limits<double>::infinity();
      res.note = "reduced space is trivial";
      return res;
    }
    res.vertex_min.push_back(rs.min_eig);
    res.form_scale = std::max(res.form_scale, rs.norm);
    if (rs.min_eig > res.rho_hat) {
      res.rho_hat = rs.min_eig;
      res.best_vertex = static_cast<int>(i);
      res.reduced_dim = rs.reduced_dim;
      best = std::move(rs);
    }
  }
  if (vertices.size() > 1) {
    const MatrixXd Q = assemble_omega_P2(cone, vertices[static_cast<std::size_t>(res.best_vertex)].gm);
    best = reduced_min_eig(Q, gd, C, true, opt.seed);
  }
  res.threshold = opt.rel_tol * std::max(1.0, res.form_scale);
  VectorXd z = best.min_vector;
  z /= std::sqrt(cone.gamma(z));
  res.worst_direction = cone.unpack(z);
  res.worst_gamma = 1.0;
  const VertexForm& bv = vertices[static_cast<std::size_t>(res.best_vertex)];
  res.direct_ratio = omega_P2(bv.gm, bv.flags, res.worst_direction).value;
  res.worst_value = -std::numeric_limits<double>::infinity();
  for (const auto& v : vertices) res.worst_value = std::max(res.worst_value, omega_P2_value(cone, v.gm, z));

  if (res.rho_hat > res.threshold) {
    res.verdict = Verdict::satisfied;
    if (!res.subspace_is_cone) {
      res.note = "positivity shown on the subspace where active sign rows are equalities";
    }
  } else if (res.rho_hat < -res.threshold && res.worst_value < -res.threshold && vertex_set_exact) {
    res.verdict = Verdict::violated;
  } else {
    res.verdict = Verdict::inconclusive;
  }

  if (opt.mode == SufficiencyMode::cone) {
    const NecessityResult probe = necessity_scan(cone, vertices, vertex_set_exact, opt.samples, opt.seed, 0.0);
    res.has_cone_probe = true;
    res.cone_sampled_min = probe.sampled_min_ratio;
    if (res.verdict == Verdict::satisfied && !res.subspace_is_cone && probe.sampled_min_ratio <= res.threshold) {
      res.verdict = Verdict::inconclusive;
      res.note = "sign-constrained sampling outside the subspace found no uniform margin";
    }
  }
  return res;
}

}  // namespace socv
