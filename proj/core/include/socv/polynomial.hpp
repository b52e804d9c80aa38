#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

namespace socv {

struct Monomial {
  double coef = 0.0;
  std::vector<int> exponents;

  bool operator==(const Monomial&) const = default;
};

/// Value and (optionally) derivatives of a scalar polynomial at a point.
struct PolyEval {
  double value = 0.0;
  Eigen::VectorXd gradient;  // empty when order < 1
  Eigen::MatrixXd hessian;   // empty when order < 2
};

/// Sparse multivariate polynomial with real coefficients.
///
/// Terms are kept in canonical form: exponent vectors are unique, sorted
/// lexicographically, and zero coefficients are dropped. Two polynomials
/// compare equal iff their canonical term lists are identical.
class Polynomial {
 public:
  explicit Polynomial(std::size_t arity = 0) : arity_(arity) {}

  /// Throws DimensionError if any exponent vector has the wrong length and
  /// DomainError on a negative exponent.
  Polynomial(std::size_t arity, std::vector<Monomial> terms);

  static Polynomial constant(std::size_t arity, double c);
  /// The polynomial `coef * z_var`.
  static Polynomial variable(std::size_t arity, std::size_t var, double coef = 1.0);

  std::size_t arity() const noexcept { return arity_; }
  std::span<const Monomial> terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int degree() const noexcept;

  double value(const Eigen::Ref<const Eigen::VectorXd>& z) const;
  PolyEval evaluate(const Eigen::Ref<const Eigen::VectorXd>& z, int order) const;

  bool operator==(const Polynomial&) const = default;

 private:
  void canonicalize();

  std::size_t arity_ = 0;
  std::vector<Monomial> terms_;
};

}  // namespace socv
