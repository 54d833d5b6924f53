#pragma once

#include <stdexcept>
#include <string>

namespace voltarget {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Adaptive quadrature ran out of subdivisions before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A result was requested outside the hypotheses it is valid under
// (e.g. the rho-vega conversion on a market with time-dependent curves).
class HypothesisError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace voltarget
