#pragma once

#include <stdexcept>
#include <string>

namespace socv {

/// Malformed problem/trajectory document. The message carries a JSON-path
/// style location such as `$.fields[1][0][2].x`.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sizes of vectors, matrices or exponent arrays do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A value lies outside its admissible domain (T <= 0, N < 2, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The state, costate or a linearized trajectory left the finite range.
class IntegrationDiverged : public std::runtime_error {
 public:
  IntegrationDiverged(const std::string& what, int node)
      : std::runtime_error(what), node_(node) {}
  int node() const noexcept { return node_; }

 private:
  int node_;
};

/// A transformed quadratic form was requested for a multiplier outside the
/// class on which that form is defined.
class FormRefused : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Unknown registry name; the message lists the available entries.
class UnknownProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace socv
