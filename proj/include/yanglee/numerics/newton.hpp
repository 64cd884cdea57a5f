#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "yanglee/errors.hpp"

namespace yanglee {

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 100;
  /// Backtracking halvings allowed per step.
  int max_backtracks = 30;
  double relative_step = 1e-7;
};

struct NewtonResult {
  std::vector<cplx> x;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

using ComplexSystem = std::function<std::vector<cplx>(const std::vector<cplx>&)>;

namespace detail {

inline double inf_norm(const std::vector<cplx>& v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace detail

/// Damped Newton iteration for F(x) = 0 over n complex unknowns.
///
/// F is assumed holomorphic, so a forward difference along the real axis of
/// each coordinate, with step relative_step * (1 + |x_j|), gives the complex
/// Jacobian column. Steps are halved until the infinity-norm residual drops.
/// Throws ConvergenceError with the best iterate on a singular Jacobian, a
/// non-finite residual or iteration exhaustion.
inline NewtonResult newton_system(const ComplexSystem& f, std::vector<cplx> x0, const NewtonOptions& opt = {}) {
  if (x0.empty()) throw DomainError("newton_system: empty initial point");
  const std::size_t n = x0.size();
  NewtonResult res;
  res.x = std::move(x0);
  std::vector<cplx> fx = f(res.x);
  if (fx.size() != n) throw DomainError("newton_system: F must map n unknowns to n residuals");
  res.residual = detail::inf_norm(fx);
  res.history.push_back(res.residual);
  if (!std::isfinite(res.residual)) {
    throw ConvergenceError("newton_system: residual not finite at initial point", res.x, res.residual, res.history);
  }

  Eigen::MatrixXcd jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
  while (res.residual > opt.tol) {
    if (res.iterations >= opt.max_iterations) {
      throw ConvergenceError("newton_system: iteration limit reached", res.x, res.residual, res.history);
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<cplx> xp = res.x;
      // Power-of-two step keeps x + h and the difference exact in binary.
      xp[j] += std::exp2(std::round(std::log2(opt.relative_step * (1.0 + std::abs(res.x[j])))));
      const double h = xp[j].real() - res.x[j].real();
      const auto fp = f(xp);
      for (std::size_t i = 0; i < n; ++i) {
        jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (fp[i] - fx[i]) / h;
      }
    }
    for (std::size_t i = 0; i < n; ++i) rhs(static_cast<Eigen::Index>(i)) = -fx[i];
    const auto lu = jac.fullPivLu();
    if (!lu.isInvertible()) {
      throw ConvergenceError("newton_system: singular Jacobian", res.x, res.residual, res.history);
    }
    const Eigen::VectorXcd dx = lu.solve(rhs);

    double lambda = 1.0;
    bool accepted = false;
    std::vector<cplx> trial(n);
    std::vector<cplx> ftrial;
    double rtrial = 0.0;
    for (int b = 0; b <= opt.max_backtracks; ++b) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = res.x[i] + lambda * dx(static_cast<Eigen::Index>(i));
      ftrial = f(trial);
      rtrial = detail::inf_norm(ftrial);
      if (std::isfinite(rtrial) && rtrial < res.residual) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    ++res.iterations;
    if (!accepted) {
      throw ConvergenceError("newton_system: no descent along the Newton direction", res.x, res.residual,
                             res.history);
    }
    res.x = trial;
    fx = std::move(ftrial);
    res.residual = rtrial;
    res.history.push_back(rtrial);
  }
  return res;
}

inline NewtonResult newton_system(const ComplexSystem& f, std::vector<cplx> x0, double tol) {
  NewtonOptions opt;
  opt.tol = tol;
  return newton_system(f, std::move(x0), opt);
}

}  // namespace yanglee
