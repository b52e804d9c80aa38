#include "socv/registry.hpp"

#include "socv/errors.hpp"

namespace socv {

namespace {

Polynomial poly(std::size_t arity, std::vector<Monomial> terms) { return Polynomial(arity, std::move(terms)); }

EndpointMap endpoint(std::size_t arity, std::vector<Monomial> terms, EndpointKind kind) {
  return EndpointMap{poly(arity, std::move(terms)), kind};
}

ProblemDef make_pe(double T, double u2_sign) {
  ProblemDef p;
  p.name = u2_sign > 0 ? "pe" : "lc-violator";
  p.n = 3;
  p.l = 1;
  p.m = 1;
  p.T = T;
  // variables (x1, x2, x3, u)
  VectorField f0{{poly(4, {{1, {0, 1, 0, 0}}, {1, {0, 0, 0, 1}}}),
                  poly(4, {}),
                  poly(4, {{1, {2, 0, 0, 0}}, {1, {0, 2, 0, 0}}, {u2_sign, {0, 0, 0, 2}}})}};
  VectorField f1{{poly(4, {}), poly(4, {{1, {0, 0, 0, 0}}}), poly(4, {{1, {0, 1, 0, 0}}})}};
  p.fields = {f0, f1};
  // endpoint variables (x1(0), x2(0), x3(0), x1(T), x2(T), x3(T))
  p.cost = endpoint(6, {{-2, {0, 0, 0, 1, 1, 0}}, {1, {0, 0, 0, 0, 0, 1}}}, EndpointKind::cost);
  for (int i = 0; i < 3; ++i) {
    std::vector<int> e(6, 0);
    e[static_cast<std::size_t>(i)] = 1;
    p.equalities.push_back(endpoint(6, {{1, e}}, EndpointKind::equality));
  }
  return p;
}

ProblemDef make_lq(double T) {
  ProblemDef p;
  p.name = "lq-decoupled";
  p.n = 2;
  p.l = 1;
  p.m = 1;
  p.T = T;
  // variables (x1, x2, u): x1' = v, x2' = u^2 + x1^2 + x1 v
  VectorField f0{{poly(3, {}), poly(3, {{1, {0, 0, 2}}, {1, {2, 0, 0}}})}};
  VectorField f1{{poly(3, {{1, {0, 0, 0}}}), poly(3, {{1, {1, 0, 0}}})}};
  p.fields = {f0, f1};
  p.cost = endpoint(4, {{1, {0, 0, 0, 1}}}, EndpointKind::cost);
  p.equalities.push_back(endpoint(4, {{1, {1, 0, 0, 0}}}, EndpointKind::equality));
  p.equalities.push_back(endpoint(4, {{1, {0, 1, 0, 0}}}, EndpointKind::equality));
  return p;
}

ProblemDef make_goh_violator(double T) {
  ProblemDef p;
  p.name = "goh-violator";
  p.n = 2;
  p.l = 1;
  p.m = 2;
  p.T = T;
  // variables (x1, x2, u): x1' = u^2 + v2 x2, x2' = v1
  VectorField f0{{poly(3, {{1, {0, 0, 2}}}), poly(3, {})}};
  VectorField f1{{poly(3, {}), poly(3, {{1, {0, 0, 0}}})}};
  VectorField f2{{poly(3, {{1, {0, 1, 0}}}), poly(3, {})}};
  p.fields = {f0, f1, f2};
  p.cost = endpoint(4, {{1, {0, 0, 1, 0}}}, EndpointKind::cost);
  p.equalities.push_back(endpoint(4, {{1, {1, 0, 0, 0}}}, EndpointKind::equality));
  p.equalities.push_back(endpoint(4, {{1, {0, 1, 0, 0}}}, EndpointKind::equality));
  return p;
}

ProblemDef make_cubic(double T) {
  ProblemDef p;
  p.name = "cubic";
  p.n = 2;
  p.l = 1;
  p.m = 1;
  p.T = T;
  // variables (x1, x2, u): x1' = u + v, x2' = u^2 + u^3 + x1^2 + x1^3 + x1 v
  VectorField f0{{poly(3, {{1, {0, 0, 1}}}),
                  poly(3, {{1, {0, 0, 2}}, {1, {0, 0, 3}}, {1, {2, 0, 0}}, {1, {3, 0, 0}}})}};
  VectorField f1{{poly(3, {{1, {0, 0, 0}}}), poly(3, {{1, {1, 0, 0}}})}};
  p.fields = {f0, f1};
  p.cost = endpoint(4, {{1, {0, 0, 0, 1}}}, EndpointKind::cost);
  p.equalities.push_back(endpoint(4, {{1, {1, 0, 0, 0}}}, EndpointKind::equality));
  p.equalities.push_back(endpoint(4, {{1, {0, 1, 0, 0}}}, EndpointKind::equality));
  return p;
}

}  // namespace

std::vector<std::string> registry_names() { return {"pe", "lq-decoupled", "goh-violator", "lc-violator", "cubic"}; }

ProblemDef registry_problem(const std::string& name, std::optional<double> T) {
  const double t = T.value_or(1.0);
  if (!(t > 0.0)) throw DomainError("horizon T must be positive");
  ProblemDef p;
  if (name == "pe") {
    p = make_pe(t, 1.0);
  } else if (name == "lc-violator") {
    p = make_pe(t, -1.0);
  } else if (name == "lq-decoupled") {
    p = make_lq(t);
  } else if (name == "goh-violator") {
    p = make_goh_violator(t);
  } else if (name == "cubic") {
    p = make_cubic(t);
  } else {
    std::string list;
    for (const auto& n : registry_names()) list += (list.empty() ? "" : ", ") + n;
    throw UnknownProblem("unknown problem '" + name + "'; available: " + list);
  }
  p.validate();
  return p;
}

RegistryEntry registry(const std::string& name, int N, std::optional<double> T) {
  RegistryEntry e{registry_problem(name, T), {}};
  e.reference = reference_trajectory(e.problem, Grid::make(e.problem.T, N));
  return e;
}

}  // namespace socv
