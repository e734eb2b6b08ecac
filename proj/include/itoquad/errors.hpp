#pragma once

#include <stdexcept>
#include <string>

namespace itoquad {

// Covariance matrix handed to cholesky() has a pivot below -tol.
class NotPsdError : public std::runtime_error {
 public:
  explicit NotPsdError(const std::string& what) : std::runtime_error(what) {}
};

// An integrand was evaluated at a point where it is unbounded
// (t^gamma with gamma < 0 at t = 0).  Callers that implement the
// skip rule catch this; everyone else propagates.
class SingularEvaluation : public std::domain_error {
 public:
  explicit SingularEvaluation(const std::string& what) : std::domain_error(what) {}
};

// Higher-order norm diagnostics need d/dt of the integrand and the
// integrand does not expose one (the jump function).
class MissingDerivative : public std::runtime_error {
 public:
  explicit MissingDerivative(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace itoquad
