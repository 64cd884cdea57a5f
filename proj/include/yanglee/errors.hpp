#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace yanglee {

using cplx = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a point where the quantity is singular (exceptional point,
/// pole of a Fermi factor, zero energy).
class SingularityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// An iterative method stopped without meeting its tolerance. Carries the best
/// iterate seen and its residual so callers can decide what to do with it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<cplx> best_iterate, double residual,
                   std::vector<double> history = {})
      : Error(what),
        best_iterate_(std::move(best_iterate)),
        residual_(residual),
        history_(std::move(history)) {}

  const std::vector<cplx>& best_iterate() const noexcept { return best_iterate_; }
  double residual() const noexcept { return residual_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  std::vector<cplx> best_iterate_;
  double residual_;
  std::vector<double> history_;
};

/// Adaptive quadrature ran out of subdivisions before the error estimate met
/// the tolerance.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, cplx partial, double estimate)
      : Error(what), partial_(partial), estimate_(estimate) {}

  cplx partial_result() const noexcept { return partial_; }
  double error_estimate() const noexcept { return estimate_; }

 private:
  cplx partial_;
  double estimate_;
};

}  // namespace yanglee
