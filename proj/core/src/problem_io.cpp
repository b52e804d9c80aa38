#include "socv/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "socv/errors.hpp"

namespace socv {

using nlohmann::json;

namespace {

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(path + "." + key + ": missing");
  return *it;
}

int read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<int>();
}

double read_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

std::vector<int> read_exponents(const json& j, std::size_t expected, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array of exponents");
  if (j.size() != expected) {
    throw DimensionError(path + ": exponent array has length " + std::to_string(j.size()) +
                         ", expected " + std::to_string(expected));
  }
  std::vector<int> e;
  e.reserve(expected);
  for (std::size_t k = 0; k < j.size(); ++k) {
    const int v = read_int(j[k], at(path, k));
    if (v < 0) throw ParseError(at(path, k) + ": negative exponent");
    e.push_back(v);
  }
  return e;
}

Polynomial read_field_component(const json& j, int n, int l, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected a list of terms");
  std::vector<Monomial> terms;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string tp = at(path, k);
    const json& t = j[k];
    Monomial mono;
    mono.coef = read_number(require(t, "coef", tp), tp + ".coef");
    mono.exponents = read_exponents(require(t, "x", tp), static_cast<std::size_t>(n), tp + ".x");
    std::vector<int> eu;
    if (t.contains("u")) {
      eu = read_exponents(t["u"], static_cast<std::size_t>(l), tp + ".u");
    } else if (l > 0) {
      eu.assign(static_cast<std::size_t>(l), 0);
    }
    mono.exponents.insert(mono.exponents.end(), eu.begin(), eu.end());
    terms.push_back(std::move(mono));
  }
  return Polynomial(static_cast<std::size_t>(n + l), std::move(terms));
}

Polynomial read_endpoint_poly(const json& j, int n, const std::string& path) {
  const json* list = &j;
  if (j.is_object()) list = &require(j, "terms", path);
  if (!list->is_array()) throw ParseError(path + ": expected a list of terms");
  std::vector<Monomial> terms;
  for (std::size_t k = 0; k < list->size(); ++k) {
    const std::string tp = at(path, k);
    const json& t = (*list)[k];
    Monomial mono;
    mono.coef = read_number(require(t, "coef", tp), tp + ".coef");
    mono.exponents = read_exponents(require(t, "x", tp), static_cast<std::size_t>(2 * n), tp + ".x");
    terms.push_back(std::move(mono));
  }
  return Polynomial(static_cast<std::size_t>(2 * n), std::move(terms));
}

json write_poly(const Polynomial& poly, int n, int l, bool endpoint) {
  json out = json::array();
  for (const auto& t : poly.terms()) {
    json term;
    term["coef"] = t.coef;
    if (endpoint) {
      term["x"] = t.exponents;
    } else {
      term["x"] = std::vector<int>(t.exponents.begin(), t.exponents.begin() + n);
      term["u"] = std::vector<int>(t.exponents.begin() + n, t.exponents.begin() + n + l);
    }
    out.push_back(std::move(term));
  }
  return out;
}

}  // namespace

ProblemDef parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("$: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("$: expected an object");

  ProblemDef p;
  p.n = read_int(require(doc, "n", "$"), "$.n");
  p.l = read_int(require(doc, "l", "$"), "$.l");
  p.m = read_int(require(doc, "m", "$"), "$.m");
  if (p.n < 1) throw DomainError("$.n: state dimension must be at least 1");
  if (p.l < 0) throw DomainError("$.l: must be nonnegative");
  if (p.m < 0) throw DomainError("$.m: must be nonnegative");
  p.T = read_number(require(doc, "T", "$"), "$.T");
  if (!(p.T > 0.0)) throw DomainError("$.T: horizon must be positive");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ParseError("$.name: expected a string");
    p.name = doc["name"].get<std::string>();
  }

  const json& fields = require(doc, "fields", "$");
  if (!fields.is_array()) throw ParseError("$.fields: expected an array");
  if (fields.size() != static_cast<std::size_t>(p.m + 1)) {
    throw DimensionError("$.fields: expected m+1 = " + std::to_string(p.m + 1) +
                         " vector fields, got " + std::to_string(fields.size()));
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string fp = at("$.fields", i);
    if (!fields[i].is_array()) throw ParseError(fp + ": expected an array of components");
    if (fields[i].size() != static_cast<std::size_t>(p.n)) {
      throw DimensionError(fp + ": expected n = " + std::to_string(p.n) + " components, got " +
                           std::to_string(fields[i].size()));
    }
    VectorField vf;
    for (std::size_t c = 0; c < fields[i].size(); ++c) {
      vf.components.push_back(read_field_component(fields[i][c], p.n, p.l, at(fp, c)));
    }
    p.fields.push_back(std::move(vf));
  }

  p.cost = {read_endpoint_poly(require(doc, "cost", "$"), p.n, "$.cost"), EndpointKind::cost};
  auto read_list = [&](const char* key, EndpointKind kind, std::vector<EndpointMap>& out) {
    if (!doc.contains(key)) return;
    const std::string lp = std::string("$.") + key;
    const json& list = doc[key];
    if (!list.is_array()) throw ParseError(lp + ": expected an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      out.push_back({read_endpoint_poly(list[k], p.n, at(lp, k)), kind});
    }
  };
  read_list("inequalities", EndpointKind::inequality, p.inequalities);
  read_list("equalities", EndpointKind::equality, p.equalities);

  if (doc.contains("x0")) {
    const json& x0 = doc["x0"];
    if (!x0.is_array()) throw ParseError("$.x0: expected an array");
    if (x0.size() != static_cast<std::size_t>(p.n)) {
      throw DimensionError("$.x0: expected length n = " + std::to_string(p.n));
    }
    p.reference_x0.resize(p.n);
    for (int k = 0; k < p.n; ++k) {
      p.reference_x0[k] = read_number(x0[static_cast<std::size_t>(k)], at("$.x0", static_cast<std::size_t>(k)));
    }
  }
  p.validate();
  return p;
}

std::string emit_problem(const ProblemDef& p, int indent) {
  json doc;
  if (!p.name.empty()) doc["name"] = p.name;
  doc["n"] = p.n;
  doc["l"] = p.l;
  doc["m"] = p.m;
  doc["T"] = p.T;
  json fields = json::array();
  for (const auto& vf : p.fields) {
    json comps = json::array();
    for (const auto& c : vf.components) comps.push_back(write_poly(c, p.n, p.l, false));
    fields.push_back(std::move(comps));
  }
  doc["fields"] = std::move(fields);
  doc["cost"] = write_poly(p.cost.value, p.n, p.l, true);
  doc["inequalities"] = json::array();
  for (const auto& e : p.inequalities) doc["inequalities"].push_back(write_poly(e.value, p.n, p.l, true));
  doc["equalities"] = json::array();
  for (const auto& e : p.equalities) doc["equalities"].push_back(write_poly(e.value, p.n, p.l, true));
  if (p.reference_x0.size() == p.n) {
    doc["x0"] = std::vector<double>(p.reference_x0.data(), p.reference_x0.data() + p.n);
  }
  return doc.dump(indent);
}

ProblemDef load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

}  // namespace socv
