#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "socv/errors.hpp"
#include "socv/forms.hpp"
#include "socv/registry.hpp"

using namespace socv;
using socv::test::pe_unit;
using socv::test::smooth_samples;

namespace {

struct PeSetup {
  RegistryEntry e;
  LinearizedSystem lin;
  Multiplier lam;
  GohMatrices gm;
  ClassFlags flags;
};

PeSetup pe(int N, double T = 1.0) {
  PeSetup s{registry("pe", N, T), {}, {}, {}, {}};
  s.lin = linearize(s.e.problem, s.e.reference);
  s.lam = pe_unit(s.e.problem, s.e.reference);
  s.gm = goh_matrices(s.e.problem, s.lin, s.e.reference, s.lam);
  s.flags = classify_multiplier(s.e.problem, s.lin, s.e.reference, s.lam, 1e-8);
  return s;
}

Direction unit_u(const PeSetup& s) {
  const int K = s.e.reference.grid.nodes();
  return integrate_linearized(s.lin, VectorXd::Zero(3), MatrixXd::Ones(K, 1), MatrixXd::Zero(K, 1));
}

Direction unit_v(const PeSetup& s) {
  const int K = s.e.reference.grid.nodes();
  return integrate_linearized(s.lin, VectorXd::Zero(3), MatrixXd::Zero(K, 1), MatrixXd::Ones(K, 1));
}

}  // namespace

TEST(Lagrangian, PeZeroAndLinearity) {
  const PeSetup s = pe(100);
  EXPECT_EQ(lagrangian_value(s.e.problem, s.e.reference, s.lam), 0.0);
  const ProblemDef p = registry_problem("cubic");
  const Grid g = Grid::make(1.0, 100);
  std::mt19937_64 rng(2);
  const Trajectory t = integrate_state(p, VectorXd::Zero(2), smooth_samples(g, 1, rng), smooth_samples(g, 1, rng), g);
  VectorXd a(1), b(2);
  a << 0.4;
  b << 1.0, -0.3;
  const Multiplier lam = make_multiplier(p, linearize(p, t), t, a, b);
  const double L = lagrangian_value(p, t, lam);
  EXPECT_NEAR(lagrangian_value(p, t, 2.5 * lam), 2.5 * L, 1e-12 * std::max(1.0, std::abs(L)));
}

TEST(Lagrangian, FeasibleIntegralTermIsQuadratureError) {
  const ProblemDef p = registry_problem("cubic");
  double prev = 0.0;
  for (int N : {50, 100, 200}) {
    const Grid g = Grid::make(1.0, N);
    MatrixXd u(g.nodes(), 1), v(g.nodes(), 1);
    for (int k = 0; k <= N; ++k) {
      u(k, 0) = 0.5 * std::sin(3 * g.t(k));
      v(k, 0) = 0.5 * std::cos(2 * g.t(k));
    }
    const Trajectory t = integrate_state(p, VectorXd::Zero(2), u, v, g);
    VectorXd a(1), b(2);
    a << 1.0;
    b << 0.2, 0.1;
    const Multiplier lam = make_multiplier(p, linearize(p, t), t, a, b);
    const VectorXd x0 = t.x.row(0).transpose(), xT = t.x.row(N).transpose();
    double ell = a(0) * eval_endpoint(p, 0, x0, xT, 0).value;
    for (int j = 0; j < 2; ++j) ell += b(j) * eval_endpoint(p, 1 + j, x0, xT, 0).value;
    const double integral = std::abs(lagrangian_value(p, t, lam) - ell);
    EXPECT_LE(integral, 10.0 / (N * N));
    if (prev > 0.0) EXPECT_LT(integral, prev);
    prev = integral;
  }
}

TEST(Omega, PeClosedForms) {
  const PeSetup s = pe(1000);
  const QuadraticEvaluation qu = omega(s.gm, unit_u(s));
  EXPECT_NEAR(qu.value, 4.0 / 3.0, 1e-6);
  EXPECT_NEAR(qu.breakdown.at("endpoint"), 0.0, 1e-12);
  EXPECT_NEAR(qu.breakdown.at("Huu"), 1.0, 1e-12);
  const QuadraticEvaluation qv = omega(s.gm, unit_v(s));
  EXPECT_NEAR(qv.value, -7.0 / 60.0, 1e-6);
  EXPECT_NEAR(qv.breakdown.at("endpoint"), -1.0, 1e-6);
  EXPECT_NEAR(qv.breakdown.at("Hxx"), 23.0 / 60.0, 1e-6);
  EXPECT_NEAR(qv.breakdown.at("Hvx"), 0.5, 1e-6);
  const Direction z = integrate_linearized(s.lin, VectorXd::Zero(3), MatrixXd::Zero(1001, 1), MatrixXd::Zero(1001, 1));
  EXPECT_EQ(omega(s.gm, z).value, 0.0);
}

TEST(OmegaP, PeTransformedClosedForms) {
  const PeSetup s = pe(1000);
  const Direction dv = unit_v(s);
  const GohDirection gv = goh_transform_direction(s.lin, dv);
  const QuadraticEvaluation pv = omega_P(s.gm, s.flags, gv, dv.v);
  EXPECT_NEAR(pv.breakdown.at("endpoint"), -0.5, 1e-6);
  EXPECT_NEAR(pv.breakdown.at("Hxx"), 1.0 / 20.0, 1e-6);
  EXPECT_NEAR(pv.breakdown.at("R"), 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(pv.value, -7.0 / 60.0, 1e-6);
  EXPECT_NEAR(omega_P2(s.gm, s.flags, gv).value, -7.0 / 60.0, 1e-6);
  const Direction du = unit_u(s);
  const GohDirection gu = goh_transform_direction(s.lin, du);
  EXPECT_NEAR(omega_P(s.gm, s.flags, gu, du.v).value, 4.0 / 3.0, 1e-6);
  EXPECT_NEAR(omega_P2(s.gm, s.flags, gu).value, 4.0 / 3.0, 1e-6);
  GohDirection zero = gu;
  zero.xi0.setZero();
  zero.u.setZero();
  zero.y.setZero();
  zero.h.setZero();
  zero.xi.setZero();
  EXPECT_EQ(omega_P2(s.gm, s.flags, zero).value, 0.0);
  EXPECT_EQ(omega_P(s.gm, s.flags, zero, du.v).value, 0.0);
}

TEST(OmegaP2, EvaluatesWithoutDifferentiableY) {
  const PeSetup s = pe(200);
  std::mt19937_64 rng(6);
  GohDirection g;
  g.xi0 = VectorXd::Zero(3);
  g.u = MatrixXd::Random(201, 1);
  g.y = MatrixXd::Random(201, 1);  // white noise: no v with y = int v on the grid is smooth
  g.h = VectorXd::Constant(1, 0.7);
  g.xi = integrate_goh_state(goh_propagator(s.lin, s.gm.B), g.xi0, g.u, g.y);
  const QuadraticEvaluation q = omega_P2(s.gm, s.flags, g);
  EXPECT_TRUE(std::isfinite(q.value));
}

TEST(OmegaP, RefusedOutsideClass) {
  const auto lc = registry("lc-violator", 50);
  const LinearizedSystem lin = linearize(lc.problem, lc.reference);
  const Multiplier lam = pe_unit(lc.problem, lc.reference);
  const GohMatrices gm = goh_matrices(lc.problem, lin, lc.reference, lam);
  const ClassFlags f = classify_multiplier(lc.problem, lin, lc.reference, lam, 1e-8);
  const Direction d = integrate_linearized(lin, VectorXd::Zero(3), MatrixXd::Ones(51, 1), MatrixXd::Ones(51, 1));
  const GohDirection g = goh_transform_direction(lin, d);
  EXPECT_THROW(omega_P(gm, f, g, d.v), FormRefused);
  EXPECT_THROW(omega_P2(gm, f, g), FormRefused);

  const auto gv = registry("goh-violator", 50);
  const LinearizedSystem lg = linearize(gv.problem, gv.reference);
  const MultiplierSet s = find_multipliers(gv.problem, gv.reference, 1e-8);
  const GohMatrices gmg = goh_matrices(gv.problem, lg, gv.reference, s.vertices[0]);
  const ClassFlags fg = classify_multiplier(gv.problem, lg, gv.reference, s.vertices[0], 1e-8);
  EXPECT_TRUE(fg.in_co_lambda_sharp);
  const Direction dg = integrate_linearized(lg, VectorXd::Zero(2), MatrixXd::Ones(51, 1), MatrixXd::Ones(51, 2));
  const GohDirection gg = goh_transform_direction(lg, dg);
  EXPECT_NO_THROW(omega_P(gmg, fg, gg, dg.v));
  EXPECT_THROW(omega_P2(gmg, fg, gg), FormRefused);
}

TEST(OmegaP, InvariantUnderSubstitutedVWhenGVanishes) {
  const PeSetup s = pe(200);
  std::mt19937_64 rng(8);
  const Direction d = integrate_linearized(s.lin, VectorXd::Random(3), smooth_samples(s.e.reference.grid, 1, rng),
                                           smooth_samples(s.e.reference.grid, 1, rng));
  const GohDirection g = goh_transform_direction(s.lin, d);
  const double a = omega_P(s.gm, s.flags, g, d.v).value;
  const double b = omega_P(s.gm, s.flags, g, MatrixXd::Random(201, 1)).value;
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, omega_P2(s.gm, s.flags, g).value);
}

TEST(Omega, LinearInLambdaAndQuadraticInDirection) {
  const ProblemDef p = registry_problem("cubic");
  const Grid g = Grid::make(1.0, 200);
  std::mt19937_64 rng(10);
  const Trajectory t = integrate_state(p, VectorXd::Zero(2), 0.3 * smooth_samples(g, 1, rng),
                                       0.3 * smooth_samples(g, 1, rng), g);
  const LinearizedSystem lin = linearize(p, t);
  VectorXd a1(1), b1(2), a2(1), b2(2);
  a1 << 0.3;
  b1 << 1.0, 0.2;
  a2 << 1.1;
  b2 << -0.4, 0.5;
  const Multiplier l1 = make_multiplier(p, lin, t, a1, b1), l2 = make_multiplier(p, lin, t, a2, b2);
  const Direction d = integrate_linearized(lin, VectorXd::Random(2), smooth_samples(g, 1, rng), smooth_samples(g, 1, rng));
  const double w1 = omega(goh_matrices(p, lin, t, l1), d).value;
  const double w2 = omega(goh_matrices(p, lin, t, l2), d).value;
  const double w12 = omega(goh_matrices(p, lin, t, 2.0 * l1 + 3.0 * l2), d).value;
  EXPECT_NEAR(w12, 2.0 * w1 + 3.0 * w2, 1e-11 * (1.0 + std::abs(w12)));
  const Direction d3 = integrate_linearized(lin, -3.0 * d.x0, -3.0 * d.u, -3.0 * d.v);
  EXPECT_NEAR(omega(goh_matrices(p, lin, t, l1), d3).value, 9.0 * w1, 1e-11 * (1.0 + std::abs(9.0 * w1)));
}

TEST(GohIdentity, DifferenceShrinksQuadratically) {
  // omega and omega_P agree up to discretization error on smooth directions
  for (const char* name : {"pe", "lq-decoupled", "cubic"}) {
    std::vector<double> errs;
    for (int N : {200, 400, 800}) {
      const auto e = registry(name, N);
      const LinearizedSystem lin = linearize(e.problem, e.reference);
      const MultiplierSet s = find_multipliers(e.problem, e.reference, 1e-8);
      const Multiplier& lam = s.vertices[0];
      const GohMatrices gm = goh_matrices(e.problem, lin, e.reference, lam);
      const ClassFlags f = classify_multiplier(e.problem, lin, e.reference, lam, 1e-8);
      std::mt19937_64 rng(99);
      double worst = 0.0;
      for (int trial = 0; trial < 10; ++trial) {
        const VectorXd x0 = socv::test::gaussian(e.problem.n, rng);
        const Direction d = integrate_linearized(lin, x0, smooth_samples(e.reference.grid, e.problem.l, rng),
                                                 smooth_samples(e.reference.grid, e.problem.m, rng));
        const GohDirection g = goh_transform_direction(lin, d);
        worst = std::max(worst, std::abs(omega(gm, d).value - omega_P(gm, f, g, d.v).value));
      }
      errs.push_back(worst);
    }
    EXPECT_LT(errs[2], 1e-4) << name;
    if (errs[1] > 1e-13) EXPECT_GT(std::log2(errs[0] / errs[1]), 1.9) << name;
    if (errs[2] > 1e-13) EXPECT_GT(std::log2(errs[1] / errs[2]), 1.9) << name;
  }
}

TEST(ExpansionProbe, PeAlongAffineControlIsQuadratureLimited) {
  for (double T : {0.1, 0.5, 1.0}) {
    const PeSetup s = pe(1000, T);
    Perturbation dw{VectorXd::Zero(3), MatrixXd::Zero(1001, 1), MatrixXd::Ones(1001, 1)};
    const ProbeResult r = expansion_probe(s.e.problem, s.e.reference, s.lam, dw);
    const double closed = T * T / 2 - 2 * T * T * T / 3 + std::pow(T, 5) / 20;
    for (std::size_t i = 0; i < r.sigmas.size(); ++i) {
      EXPECT_NEAR(r.delta_L[i] / (r.sigmas[i] * r.sigmas[i]), closed, 1e-6) << T;
    }
    EXPECT_TRUE(r.quadrature_limited || r.zero_remainder) << T;
  }
}

TEST(ExpansionProbe, CubicRemainder) {
  const auto e = registry("cubic", 1000);
  const MultiplierSet s = find_multipliers(e.problem, e.reference, 1e-8);
  Perturbation dw{VectorXd::Zero(2), MatrixXd::Ones(1001, 1), MatrixXd::Zero(1001, 1)};
  const ProbeResult r = expansion_probe(e.problem, e.reference, s.vertices[0], dw);
  EXPECT_GE(r.slope, 2.9);
  EXPECT_LE(r.slope, 3.5);
  std::mt19937_64 rng(12);
  Perturbation sm{socv::test::gaussian(2, rng), smooth_samples(e.reference.grid, 1, rng),
                  smooth_samples(e.reference.grid, 1, rng)};
  const ProbeResult q = expansion_probe(e.problem, e.reference, s.vertices[0], sm);
  EXPECT_GE(q.slope, 2.9);
}

TEST(ExpansionProbe, ZeroPerturbation) {
  const PeSetup s = pe(100);
  Perturbation dw{VectorXd::Zero(3), MatrixXd::Zero(101, 1), MatrixXd::Zero(101, 1)};
  const ProbeResult r = expansion_probe(s.e.problem, s.e.reference, s.lam, dw);
  for (double x : r.remainders) EXPECT_EQ(x, 0.0);
  EXPECT_TRUE(r.zero_remainder);
}

TEST(BoundaryForm, PeCrossTerm) {
  const PeSetup s = pe(10);
  // g = 1/2 zeta' l'' zeta + h (HvxT xiT + 1/2 ST h) with l'' cross entries -2
  const double g = boundary_form(s.gm, VectorXd::Zero(3), Eigen::Vector3d(0.5, 0, 0), VectorXd::Constant(1, 1.0));
  EXPECT_NEAR(g, -1.0 + 0.5, 1e-14);
}
