#include "socv/multipliers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "socv/errors.hpp"
#include "socv/goh.hpp"

namespace socv {

VectorXd Multiplier::coefficients() const {
  VectorXd c(alpha.size() + beta.size());
  c << alpha, beta;
  return c;
}

Multiplier operator*(double c, const Multiplier& m) {
  return Multiplier{c * m.alpha, c * m.beta, c * m.p, false};
}

Multiplier operator+(const Multiplier& a, const Multiplier& b) {
  return Multiplier{a.alpha + b.alpha, a.beta + b.beta, a.p + b.p, false};
}

const char* to_string(MultiplierStatus s) {
  switch (s) {
    case MultiplierStatus::found: return "found";
    case MultiplierStatus::none_found: return "none_found";
    case MultiplierStatus::infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

// Columns: gradients of every endpoint function at (x(0), x(T)), length 2n.
MatrixXd endpoint_gradients(const ProblemDef& p, const Trajectory& traj) {
  const VectorXd x0 = traj.x.row(0).transpose();
  const VectorXd xT = traj.x.row(traj.grid.N).transpose();
  MatrixXd g(2 * p.n, p.endpoint_count());
  for (int k = 0; k < p.endpoint_count(); ++k) g.col(k) = eval_endpoint(p, k, x0, xT, 1).gradient;
  return g;
}

void check_coefficients(const ProblemDef& p, const VectorXd& alpha, const VectorXd& beta) {
  if (alpha.size() != 1 + p.d_phi() || beta.size() != p.d_eta()) {
    throw DimensionError("multiplier coefficients must have sizes d_phi+1 and d_eta");
  }
}

// Backward RK4 for columns of Q with q' = -Fx^T q, from Q at t = T.
std::vector<MatrixXd> costate_sweep(const LinearizedSystem& lin, const MatrixXd& QT) {
  const int N = lin.grid.N;
  const double h = lin.grid.h();
  std::vector<MatrixXd> Q(static_cast<std::size_t>(N + 1));
  Q[static_cast<std::size_t>(N)] = QT;
  for (int k = N - 1; k >= 0; --k) {
    const auto kk = static_cast<std::size_t>(k);
    const MatrixXd A1 = -lin.Fx[kk + 1].transpose();
    const MatrixXd A0 = -lin.Fx[kk].transpose();
    const MatrixXd Am = 0.5 * (A0 + A1);
    const MatrixXd& q = Q[kk + 1];
    const MatrixXd k1 = A1 * q;
    const MatrixXd k2 = Am * (q - 0.5 * h * k1);
    const MatrixXd k3 = Am * (q - 0.5 * h * k2);
    const MatrixXd k4 = A0 * (q - h * k3);
    Q[kk] = q - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!Q[kk].allFinite()) throw IntegrationDiverged("costate integration diverged", k);
  }
  return Q;
}

}  // namespace

MatrixXd integrate_costate(const ProblemDef& p, const LinearizedSystem& lin, const Trajectory& traj,
                           const VectorXd& alpha, const VectorXd& beta) {
  check_coefficients(p, alpha, beta);
  VectorXd c(alpha.size() + beta.size());
  c << alpha, beta;
  const VectorXd pT = endpoint_gradients(p, traj).bottomRows(p.n) * c;
  const auto Q = costate_sweep(lin, pT);
  MatrixXd P(lin.grid.nodes(), p.n);
  for (int k = 0; k < lin.grid.nodes(); ++k) P.row(k) = Q[static_cast<std::size_t>(k)].transpose();
  return P;
}

MatrixXd integrate_costate(const ProblemDef& p, const Trajectory& traj, const VectorXd& alpha,
                           const VectorXd& beta) {
  return integrate_costate(p, linearize(p, traj), traj, alpha, beta);
}

Multiplier make_multiplier(const ProblemDef& p, const LinearizedSystem& lin, const Trajectory& traj,
                           const VectorXd& alpha, const VectorXd& beta) {
  return Multiplier{alpha, beta, integrate_costate(p, lin, traj, alpha, beta), false};
}

MultiplierResiduals multiplier_residuals(const ProblemDef& p, const LinearizedSystem& lin,
                                         const Trajectory& traj, const Multiplier& lambda) {
  check_coefficients(p, lambda.alpha, lambda.beta);
  if (lambda.p.rows() != lin.grid.nodes() || lambda.p.cols() != p.n) {
    throw DimensionError("multiplier costate does not match the grid");
  }
  MultiplierResiduals r;
  const VectorXd d0 = endpoint_gradients(p, traj).topRows(p.n) * lambda.coefficients();
  r.transv0 = (lambda.p.row(0).transpose() + d0).norm();
  for (int k = 0; k < lin.grid.nodes(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const VectorXd pk = lambda.p.row(k).transpose();
    if (p.l > 0) r.Hu = std::max(r.Hu, (lin.Fu[kk].transpose() * pk).lpNorm<Eigen::Infinity>());
    if (p.m > 0) r.Hv = std::max(r.Hv, (lin.Fv[kk].transpose() * pk).lpNorm<Eigen::Infinity>());
  }
  return r;
}

MultiplierResiduals multiplier_residuals(const ProblemDef& p, const Trajectory& traj,
                                         const Multiplier& lambda) {
  return multiplier_residuals(p, linearize(p, traj), traj, lambda);
}

namespace {

// Extreme rays of the pointed cone {c : G c >= 0}, each scaled so that
// sum(G c) = 1. Returns false when the subset budget is exceeded.
bool cone_vertices(const MatrixXd& G, long& budget, std::vector<VectorXd>& rays) {
  const int q = static_cast<int>(G.rows());
  const int k = static_cast<int>(G.cols());
  const double eps = 1e-10 * std::max(1.0, G.cwiseAbs().maxCoeff());
  auto accept = [&](const VectorXd& r) {
    for (double sgn : {1.0, -1.0}) {
      const VectorXd c = sgn * r;
      const VectorXd gc = G * c;
      if (gc.minCoeff() < -eps) continue;
      const double s = gc.sum();
      if (s <= eps) continue;
      rays.push_back(c / s);
    }
  };
  if (k == 1) {
    accept(VectorXd::Ones(1));
    return true;
  }
  if (q < k - 1) return true;
  std::vector<int> idx(static_cast<std::size_t>(k - 1));
  for (int i = 0; i < k - 1; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (--budget < 0) return false;
    MatrixXd sub(k - 1, k);
    for (int i = 0; i < k - 1; ++i) sub.row(i) = G.row(idx[static_cast<std::size_t>(i)]);
    Eigen::JacobiSVD<MatrixXd> svd(sub, Eigen::ComputeFullV);
    const VectorXd& sv = svd.singularValues();
    if (sv.size() == k - 1 && sv[k - 2] > 1e-10 * std::max(1.0, sv[0])) accept(svd.matrixV().col(k - 1));
    int pos = k - 2;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == q - (k - 1) + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k - 1; ++i) idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return true;
}

void push_unique(std::vector<VectorXd>& pts, const VectorXd& v) {
  for (const auto& w : pts) {
    if ((w - v).lpNorm<Eigen::Infinity>() <= 1e-9) return;
  }
  pts.push_back(v);
}

double ell1_normalized(const VectorXd& lam, int n_alpha, VectorXd& out) {
  const double s = lam.head(n_alpha).sum() + lam.tail(lam.size() - n_alpha).lpNorm<1>();
  out = lam / s;
  return s;
}

}  // namespace

MultiplierSet find_multipliers(const ProblemDef& p, const Trajectory& traj, double tol,
                               const MultiplierOptions& opt) {
  MultiplierSet set;
  const int s = p.endpoint_count();
  const int na = 1 + p.d_phi();
  const FeasibilityReport feas = feasibility_report(p, traj, opt.feasibility_tol);
  if (!feas.feasible) {
    set.status = MultiplierStatus::infeasible;
    set.note = "candidate trajectory is not feasible within " + std::to_string(opt.feasibility_tol);
    set.basis.resize(s, 0);
    return set;
  }
  const LinearizedSystem lin = linearize(p, traj);
  const MatrixXd grads = endpoint_gradients(p, traj);

  // Equality-constraint qualification (rank of D eta).
  if (p.d_eta() > 0) {
    const MatrixXd J = grads.rightCols(p.d_eta()).transpose();
    Eigen::JacobiSVD<MatrixXd> svd(J);
    const VectorXd& sv = svd.singularValues();
    const double thr = tol * std::max(sv.size() ? sv[0] : 0.0, 1.0);
    set.equality_rank = static_cast<int>((sv.array() > thr).count());
  }
  set.equality_qualified = set.equality_rank == p.d_eta();

  // Inactive inequalities carry alpha_i = 0.
  set.free_coefficients.push_back(0);
  for (int i = 0; i < p.d_phi(); ++i) {
    if (std::abs(feas.phi[i]) <= opt.active_tol) set.free_coefficients.push_back(1 + i);
  }
  for (int j = 0; j < p.d_eta(); ++j) set.free_coefficients.push_back(na + j);
  const int sf = static_cast<int>(set.free_coefficients.size());

  MatrixXd gfree(2 * p.n, sf);
  for (int c = 0; c < sf; ++c) gfree.col(c) = grads.col(set.free_coefficients[static_cast<std::size_t>(c)]);
  const auto Q = costate_sweep(lin, gfree.bottomRows(p.n));

  const int nodes = lin.grid.nodes();
  MatrixXd A(p.n + nodes * (p.l + p.m), sf);
  A.topRows(p.n) = Q[0] + gfree.topRows(p.n);
  for (int k = 0; k < nodes; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const int r0 = p.n + k * (p.l + p.m);
    if (p.l > 0) A.middleRows(r0, p.l) = lin.Fu[kk].transpose() * Q[kk];
    if (p.m > 0) A.middleRows(r0 + p.l, p.m) = lin.Fv[kk].transpose() * Q[kk];
  }

  Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
  set.singular_values = svd.singularValues();
  const double sigma_max = set.singular_values.size() ? set.singular_values[0] : 0.0;
  set.threshold = tol * sigma_max;
  int rank = 0;
  for (Eigen::Index i = 0; i < set.singular_values.size(); ++i) {
    if (set.singular_values[i] > set.threshold) ++rank;
  }
  const int k = sf - rank;
  set.basis = MatrixXd::Zero(s, k);
  for (int c = 0; c < sf; ++c) {
    set.basis.row(set.free_coefficients[static_cast<std::size_t>(c)]) = svd.matrixV().row(c).tail(k);
  }
  set.certificate_bound = 10.0 * tol * std::max(1.0, sigma_max);
  if (k == 0) {
    set.status = MultiplierStatus::none_found;
    set.note = "first-order map has a trivial null space";
    return set;
  }

  // Vertices of co Lambda: extreme rays of each beta-sign orthant section.
  std::vector<int> alpha_rows, beta_rows;
  const double row_eps = 1e-12;
  for (int i = 0; i < na; ++i) {
    if (set.basis.row(i).norm() > row_eps) alpha_rows.push_back(i);
  }
  for (int j = 0; j < p.d_eta(); ++j) {
    if (set.basis.row(na + j).norm() > row_eps) beta_rows.push_back(na + j);
  }
  std::vector<VectorXd> points;
  const int nb = static_cast<int>(beta_rows.size());
  bool exhaustive = s <= 12 && nb < 20;
  long budget = opt.max_enumeration;
  if (exhaustive) {
    const long patterns = 1L << nb;
    const int q = static_cast<int>(alpha_rows.size()) + nb;
    for (long mask = 0; mask < patterns && exhaustive; ++mask) {
      MatrixXd G(q, k);
      int r = 0;
      for (int i : alpha_rows) G.row(r++) = set.basis.row(i);
      for (int j = 0; j < nb; ++j) {
        const double sg = (mask >> j) & 1L ? -1.0 : 1.0;
        G.row(r++) = sg * set.basis.row(beta_rows[static_cast<std::size_t>(j)]);
      }
      std::vector<VectorXd> rays;
      if (!cone_vertices(G, budget, rays)) {
        exhaustive = false;
        break;
      }
      for (const auto& c : rays) {
        VectorXd lam;
        ell1_normalized(set.basis * c, na, lam);
        push_unique(points, lam);
      }
    }
  }
  if (!exhaustive) {
    points.clear();
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < opt.samples; ++t) {
      VectorXd c(k);
      for (int i = 0; i < k; ++i) c[i] = gauss(rng);
      for (double sg : {1.0, -1.0}) {
        const VectorXd lam = sg * (set.basis * c);
        if (lam.head(na).minCoeff() < -1e-12) continue;
        VectorXd normed;
        if (ell1_normalized(lam, na, normed) <= 0.0) continue;
        push_unique(points, normed);
      }
    }
  }
  set.exhaustive = exhaustive;

  int rejected = 0;
  for (const auto& lam : points) {
    VectorXd alpha = lam.head(na).cwiseMax(0.0);
    VectorXd beta = lam.tail(p.d_eta());
    Multiplier mu = make_multiplier(p, lin, traj, alpha, beta);
    mu.normalized = true;
    const double res = multiplier_residuals(p, lin, traj, mu).max();
    if (res <= set.certificate_bound) {
      set.max_residual = std::max(set.max_residual, res);
      set.vertices.push_back(std::move(mu));
    } else {
      ++rejected;
    }
  }
  if (rejected > 0) {
    set.note = std::to_string(rejected) + " candidate vertices failed the residual certificate";
  }
  set.status = set.vertices.empty() ? MultiplierStatus::none_found : MultiplierStatus::found;
  if (set.vertices.empty() && set.note.empty()) {
    set.note = "null space does not meet the alpha >= 0 orthant";
  }
  return set;
}

ClassFlags classify_multiplier(const ProblemDef& p, const LinearizedSystem& lin,
                               const Trajectory& traj, const Multiplier& lambda, double tol) {
  const HBlocks H = h_blocks(p, traj, lambda);
  ClassFlags f;
  f.min_eig_Huu = p.l > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  for (int k = 0; k < lin.grid.nodes(); ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (p.l > 0) {
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(H.Huu[kk], Eigen::EigenvaluesOnly);
      f.min_eig_Huu = std::min(f.min_eig_Huu, es.eigenvalues()[0]);
      if (p.m > 0) f.max_abs_Hvu = std::max(f.max_abs_Hvu, H.Hvu[kk].cwiseAbs().maxCoeff());
    }
    if (p.m > 0) {
      const MatrixXd HF = H.Hvx[kk] * lin.Fv[kk];
      f.max_abs_G = std::max(f.max_abs_G, (0.5 * (HF - HF.transpose())).cwiseAbs().maxCoeff());
    }
  }
  f.in_co_lambda_sharp = f.min_eig_Huu >= -tol && f.max_abs_Hvu <= tol;
  f.in_G_co_lambda_sharp = f.in_co_lambda_sharp && f.max_abs_G <= tol;
  return f;
}

ClassFlags classify_multiplier(const ProblemDef& p, const Trajectory& traj,
                               const Multiplier& lambda, double tol) {
  return classify_multiplier(p, linearize(p, traj), traj, lambda, tol);
}

bool zero_in_convex_hull(const std::vector<VectorXd>& points, double tol) {
  if (points.empty()) return false;
  const int d = static_cast<int>(points[0].size());
  const int K = static_cast<int>(points.size());
  double scale = 1.0;
  for (const auto& pt : points) scale = std::max(scale, pt.norm());
  const double omega = 1e4 * scale;
  MatrixXd A(d + 1, K);
  for (int j = 0; j < K; ++j) {
    A.col(j).head(d) = points[static_cast<std::size_t>(j)];
    A(d, j) = omega;
  }
  VectorXd b = VectorXd::Zero(d + 1);
  b[d] = omega;

  // Lawson-Hanson nonnegative least squares.
  VectorXd w = VectorXd::Zero(K);
  std::vector<bool> passive(static_cast<std::size_t>(K), false);
  auto solve_passive = [&](VectorXd& z) {
    std::vector<int> P;
    for (int j = 0; j < K; ++j) if (passive[static_cast<std::size_t>(j)]) P.push_back(j);
    MatrixXd AP(d + 1, static_cast<int>(P.size()));
    for (std::size_t i = 0; i < P.size(); ++i) AP.col(static_cast<int>(i)) = A.col(P[i]);
    const VectorXd zp = AP.completeOrthogonalDecomposition().solve(b);
    z = VectorXd::Zero(K);
    for (std::size_t i = 0; i < P.size(); ++i) z[P[i]] = zp[static_cast<int>(i)];
  };
  for (int outer = 0; outer < 3 * K + 10; ++outer) {
    const VectorXd g = A.transpose() * (b - A * w);
    int t = -1;
    double best = 1e-14 * omega * omega;
    for (int j = 0; j < K; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && g[j] > best) {
        best = g[j];
        t = j;
      }
    }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;
    VectorXd z;
    solve_passive(z);
    for (int inner = 0; inner < K + 5; ++inner) {
      double step = 1.0;
      bool clipped = false;
      for (int j = 0; j < K; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) {
          clipped = true;
          const double denom = w[j] - z[j];
          if (denom > 0.0) step = std::min(step, w[j] / denom);
        }
      }
      if (!clipped) break;
      w += step * (z - w);
      for (int j = 0; j < K; ++j) {
        if (passive[static_cast<std::size_t>(j)] && w[j] <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          w[j] = 0.0;
        }
      }
      solve_passive(z);
    }
    w = z;
  }
  const double total = w.sum();
  if (total <= 0.0) return false;
  VectorXd c = VectorXd::Zero(d);
  for (int j = 0; j < K; ++j) c += (w[j] / total) * points[static_cast<std::size_t>(j)];
  return c.norm() <= tol;
}

}  // namespace socv
