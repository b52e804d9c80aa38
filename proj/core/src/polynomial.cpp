#include "socv/polynomial.hpp"

#include <algorithm>
#include <string>

#include "socv/errors.hpp"

namespace socv {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (; e > 0; --e) r *= base;
  return r;
}

}  // namespace

Polynomial::Polynomial(std::size_t arity, std::vector<Monomial> terms)
    : arity_(arity), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.exponents.size() != arity_) {
      throw DimensionError("monomial has " + std::to_string(t.exponents.size()) +
                           " exponents, polynomial arity is " + std::to_string(arity_));
    }
    for (int e : t.exponents) {
      if (e < 0) throw DomainError("negative exponent in monomial");
    }
  }
  canonicalize();
}

Polynomial Polynomial::constant(std::size_t arity, double c) {
  return Polynomial(arity, {Monomial{c, std::vector<int>(arity, 0)}});
}

Polynomial Polynomial::variable(std::size_t arity, std::size_t var, double coef) {
  if (var >= arity) throw DimensionError("variable index out of range");
  std::vector<int> e(arity, 0);
  e[var] = 1;
  return Polynomial(arity, {Monomial{coef, std::move(e)}});
}

void Polynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
  std::vector<Monomial> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponents == t.exponents) {
      merged.back().coef += t.coef;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Monomial& t) { return t.coef == 0.0; });
  terms_ = std::move(merged);
}

int Polynomial::degree() const noexcept {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int e : t.exponents) s += e;
    d = std::max(d, s);
  }
  return d;
}

double Polynomial::value(const Eigen::Ref<const Eigen::VectorXd>& z) const {
  if (static_cast<std::size_t>(z.size()) != arity_) {
    throw DimensionError("polynomial evaluated at a point of wrong dimension");
  }
  double v = 0.0;
  for (const auto& t : terms_) {
    double m = t.coef;
    for (std::size_t i = 0; i < arity_; ++i) {
      if (t.exponents[i] != 0) m *= ipow(z[i], t.exponents[i]);
    }
    v += m;
  }
  return v;
}

PolyEval Polynomial::evaluate(const Eigen::Ref<const Eigen::VectorXd>& z, int order) const {
  if (static_cast<std::size_t>(z.size()) != arity_) {
    throw DimensionError("polynomial evaluated at a point of wrong dimension");
  }
  const auto n = static_cast<Eigen::Index>(arity_);
  PolyEval out;
  if (order >= 1) out.gradient = Eigen::VectorXd::Zero(n);
  if (order >= 2) out.hessian = Eigen::MatrixXd::Zero(n, n);

  // Only variables with a positive exponent can carry a derivative, so each
  // term works on its (short) list of active variables.
  std::vector<int> active;
  std::vector<double> p0, p1, p2;
  for (const auto& t : terms_) {
    active.clear();
    p0.clear();
    p1.clear();
    p2.clear();
    for (std::size_t i = 0; i < arity_; ++i) {
      const int e = t.exponents[i];
      if (e == 0) continue;
      active.push_back(static_cast<int>(i));
      p0.push_back(ipow(z[i], e));
      p1.push_back(e * ipow(z[i], e - 1));
      p2.push_back(e >= 2 ? e * (e - 1) * ipow(z[i], e - 2) : 0.0);
    }
    const std::size_t k = active.size();
    auto prod_except = [&](std::size_t a, std::size_t b) {
      double r = t.coef;
      for (std::size_t j = 0; j < k; ++j) {
        if (j != a && j != b) r *= p0[j];
      }
      return r;
    };
    out.value += prod_except(k, k);
    if (order < 1) continue;
    for (std::size_t a = 0; a < k; ++a) {
      out.gradient[active[a]] += p1[a] * prod_except(a, k);
      if (order < 2) continue;
      out.hessian(active[a], active[a]) += p2[a] * prod_except(a, k);
      for (std::size_t b = a + 1; b < k; ++b) {
        const double hab = p1[a] * p1[b] * prod_except(a, b);
        out.hessian(active[a], active[b]) += hab;
        out.hessian(active[b], active[a]) += hab;
      }
    }
  }
  return out;
}

}  // namespace socv
