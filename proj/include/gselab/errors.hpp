#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gselab {

/// Malformed input document. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Contradictory data, e.g. an edge listed twice with different weights.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a type invariant (nonpositive weight, asymmetric matrix, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters outside the domain an operation is defined on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A coupling matrix whose marginals do not match the two measures.
class CouplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact enumeration would exceed the configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(double required, double budget)
      : std::runtime_error("enumeration budget exceeded: requires " + std::to_string(required) +
                           " evaluations, budget is " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  double required() const noexcept { return required_; }
  double budget() const noexcept { return budget_; }

 private:
  double required_;
  double budget_;
};

}  // namespace gselab
