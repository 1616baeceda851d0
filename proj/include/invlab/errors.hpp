#pragma once

#include <stdexcept>
#include <string>

namespace invlab {

// Forward-solver failures. Callers sampling many frequencies catch these per
// sample and drop the sample.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// k^2 sits on (or numerically next to) a discrete Dirichlet eigenvalue.
class NearResonance : public SolverError {
 public:
  using SolverError::SolverError;
};

class NonFinite : public SolverError {
 public:
  using SolverError::SolverError;
};

class NoConvergence : public SolverError {
 public:
  NoConvergence(const std::string& what, int iterations, double residual)
      : SolverError(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// Probe requested outside the range where every wave vector is real.
class EvanescentSkipped : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// |xi| outside the stable annulus [(m-1)k, (m+1)k].
class AnnulusViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UnsupportedM : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace invlab
