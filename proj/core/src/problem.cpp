#include "socv/problem.hpp"

#include <string>

#include "socv/errors.hpp"

namespace socv {

const EndpointMap& ProblemDef::endpoint(int which) const {
  if (which < 0 || which >= endpoint_count()) {
    throw std::out_of_range("endpoint index " + std::to_string(which) + " out of range");
  }
  if (which == 0) return cost;
  if (which <= d_phi()) return inequalities[which - 1];
  return equalities[which - 1 - d_phi()];
}

void ProblemDef::validate() const {
  if (n < 1) throw DomainError("state dimension n must be at least 1");
  if (l < 0 || m < 0) throw DomainError("control dimensions must be nonnegative");
  if (!(T > 0.0)) throw DomainError("horizon T must be positive");
  if (fields.size() != static_cast<std::size_t>(m + 1)) {
    throw DimensionError("expected " + std::to_string(m + 1) + " vector fields, got " +
                         std::to_string(fields.size()));
  }
  const auto field_arity = static_cast<std::size_t>(n + l);
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].components.size() != static_cast<std::size_t>(n)) {
      throw DimensionError("field " + std::to_string(i) + " has " +
                           std::to_string(fields[i].components.size()) + " components, expected " +
                           std::to_string(n));
    }
    for (const auto& c : fields[i].components) {
      if (c.arity() != field_arity) {
        throw DimensionError("field " + std::to_string(i) + " component has arity " +
                             std::to_string(c.arity()) + ", expected n+l = " +
                             std::to_string(field_arity));
      }
    }
  }
  const auto ep_arity = static_cast<std::size_t>(2 * n);
  for (int k = 0; k < endpoint_count(); ++k) {
    if (endpoint(k).value.arity() != ep_arity) {
      throw DimensionError("endpoint " + std::to_string(k) + " has arity " +
                           std::to_string(endpoint(k).value.arity()) + ", expected 2n = " +
                           std::to_string(ep_arity));
    }
  }
}

FieldEval eval_field(const ProblemDef& p, int i, const VectorXd& x, const VectorXd& u, int order) {
  if (i < 0 || i > p.m) {
    throw std::out_of_range("field index " + std::to_string(i) + " out of range");
  }
  if (x.size() != p.n || u.size() != p.l) throw DimensionError("eval_field: bad (x, u) size");
  const int n = p.n;
  const int l = p.l;
  VectorXd z(n + l);
  z << x, u;

  FieldEval out;
  out.order = order;
  out.value.resize(n);
  if (order >= 1) {
    out.jac_x.resize(n, n);
    out.jac_u.resize(n, l);
  }
  for (int c = 0; c < n; ++c) {
    const PolyEval e = p.fields[i].components[c].evaluate(z, order);
    out.value[c] = e.value;
    if (order >= 1) {
      out.jac_x.row(c) = e.gradient.head(n).transpose();
      out.jac_u.row(c) = e.gradient.tail(l).transpose();
    }
    if (order >= 2) {
      out.hess_xx.push_back(e.hessian.topLeftCorner(n, n));
      out.hess_xu.push_back(e.hessian.topRightCorner(n, l));
      out.hess_uu.push_back(e.hessian.bottomRightCorner(l, l));
    }
  }
  return out;
}

EndpointEval eval_endpoint(const ProblemDef& p, int which, const VectorXd& x0, const VectorXd& xT,
                           int order) {
  if (x0.size() != p.n || xT.size() != p.n) throw DimensionError("eval_endpoint: bad state size");
  VectorXd z(2 * p.n);
  z << x0, xT;
  PolyEval e = p.endpoint(which).value.evaluate(z, order);
  return EndpointEval{e.value, std::move(e.gradient), std::move(e.hessian)};
}

VectorXd eval_dynamics(const ProblemDef& p, const VectorXd& x, const VectorXd& u,
                       const VectorXd& v) {
  if (v.size() != p.m) throw DimensionError("eval_dynamics: bad v size");
  VectorXd F = eval_field(p, 0, x, u, 0).value;
  for (int i = 1; i <= p.m; ++i) {
    F += v[i - 1] * eval_field(p, i, x, u, 0).value;
  }
  return F;
}

}  // namespace socv
