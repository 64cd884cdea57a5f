#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "yanglee/errors.hpp"

namespace yanglee {

/// Dense univariate polynomial with complex coefficients; coeffs()[m] multiplies z^m.
/// Trailing zero coefficients are trimmed on construction, so the last stored
/// coefficient is the leading one.
class ComplexPolynomial {
 public:
  ComplexPolynomial() = default;
  explicit ComplexPolynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  const std::vector<cplx>& coeffs() const noexcept { return coeffs_; }

  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

  cplx leading() const { return coeffs_.empty() ? cplx{} : coeffs_.back(); }

  cplx coefficient(int m) const {
    return (m < 0 || m > degree()) ? cplx{} : coeffs_[static_cast<std::size_t>(m)];
  }

  cplx operator()(cplx z) const {
    cplx acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  /// sum_m |c_m| |z|^m, the magnitude rounding errors in Horner evaluation scale with.
  double evaluation_scale(cplx z) const {
    const double r = std::abs(z);
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  ComplexPolynomial derivative() const {
    if (degree() < 1) return ComplexPolynomial{};
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t m = 1; m < coeffs_.size(); ++m) d[m - 1] = static_cast<double>(m) * coeffs_[m];
    return ComplexPolynomial(std::move(d));
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
  }

  std::vector<cplx> coeffs_;
};

struct RootFinderOptions {
  double tol = 1e-10;
  int max_polish_iterations = 200;
  /// Seeds the starting circle of the fallback Aberth iteration.
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

namespace detail {

// Relative backward error of r as a root of p.
inline double root_backward_error(const ComplexPolynomial& p, cplx r) {
  const double scale = std::max(p.evaluation_scale(r), p.max_abs_coeff());
  return scale == 0.0 ? 0.0 : std::abs(p(r)) / scale;
}

inline double max_backward_error(const ComplexPolynomial& p, const std::vector<cplx>& roots) {
  double worst = 0.0;
  for (const auto& r : roots) worst = std::max(worst, root_backward_error(p, r));
  return worst;
}

// Simultaneous Aberth-Ehrlich refinement. Returns the iterate with the smallest
// worst-case backward error encountered.
inline std::vector<cplx> aberth_refine(const ComplexPolynomial& p, std::vector<cplx> z, int max_iter) {
  const ComplexPolynomial dp = p.derivative();
  const std::size_t n = z.size();
  std::vector<cplx> best = z;
  double best_err = max_backward_error(p, z);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < max_iter; ++it) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx pv = p(z[i]);
      if (pv == cplx{}) continue;
      const cplx dv = dp(z[i]);
      if (dv == cplx{}) continue;
      const cplx ratio = pv / dv;
      cplx repulsion{};
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i && z[i] != z[j]) repulsion += 1.0 / (z[i] - z[j]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[i] -= step;
      if (std::abs(step) > 4.0 * eps * std::max(1.0, std::abs(z[i]))) moved = true;
    }
    const double err = max_backward_error(p, z);
    if (err < best_err) {
      best_err = err;
      best = z;
    }
    if (!moved) break;
  }
  return best;
}

inline std::vector<cplx> companion_eigenvalues(const ComplexPolynomial& p, bool& ok) {
  const int d = p.degree();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d, d);
  const cplx lead = p.leading();
  for (int i = 1; i < d; ++i) c(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) c(i, d - 1) = -p.coefficient(i) / lead;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(c, /*computeEigenvectors=*/false);
  ok = solver.info() == Eigen::Success;
  std::vector<cplx> out(static_cast<std::size_t>(d));
  if (ok) {
    for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  }
  return out;
}

}  // namespace detail

/// All roots of p, repeated according to multiplicity, sorted by real then
/// imaginary part.
///
/// Roots come from the eigenvalues of the companion matrix of the monic
/// normalization, followed by an Aberth-Ehrlich polish that is kept only when it
/// lowers the backward error. Exact zero roots (vanishing low-order
/// coefficients) are split off first.
///
/// Each root r satisfies |p(r)| <= tol * max(max_m |c_m|, sum_m |c_m||r|^m);
/// otherwise a ConvergenceError carrying the best roots and residual is thrown.
inline std::vector<cplx> roots_of_polynomial(const ComplexPolynomial& p, const RootFinderOptions& opt = {}) {
  if (p.degree() < 1) throw DomainError("roots_of_polynomial: degree must be at least 1");
  if (!(opt.tol > 0.0)) throw DomainError("roots_of_polynomial: tol must be positive");

  std::vector<cplx> roots;
  std::size_t low = 0;
  while (p.coeffs()[low] == cplx{}) {
    roots.emplace_back(0.0, 0.0);
    ++low;
  }
  const ComplexPolynomial reduced(
      std::vector<cplx>(p.coeffs().begin() + static_cast<std::ptrdiff_t>(low), p.coeffs().end()));

  if (reduced.degree() >= 1) {
    bool ok = false;
    std::vector<cplx> z = detail::companion_eigenvalues(reduced, ok);
    if (!ok) {
      // Fallback: perturbed circle through the Cauchy bound.
      double bound = 0.0;
      for (int m = 0; m < reduced.degree(); ++m) {
        bound = std::max(bound, std::abs(reduced.coefficient(m) / reduced.leading()));
      }
      bound += 1.0;
      std::mt19937_64 rng(opt.seed);
      std::uniform_real_distribution<double> jitter(-0.1, 0.1);
      const int d = reduced.degree();
      z.resize(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        const double angle = 2.0 * std::numbers::pi * (i + 0.25 + jitter(rng)) / d;
        z[static_cast<std::size_t>(i)] = std::polar(bound * (1.0 + jitter(rng)), angle);
      }
    }
    std::vector<cplx> polished = detail::aberth_refine(reduced, z, opt.max_polish_iterations);
    if (detail::max_backward_error(reduced, polished) < detail::max_backward_error(reduced, z)) {
      z = std::move(polished);
    }
    roots.insert(roots.end(), z.begin(), z.end());
  }

  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  const double err = detail::max_backward_error(p, roots);
  if (!(err <= opt.tol)) {
    throw ConvergenceError("roots_of_polynomial: residual above tolerance", roots, err);
  }
  return roots;
}

inline std::vector<cplx> roots_of_polynomial(const ComplexPolynomial& p, double tol) {
  RootFinderOptions opt;
  opt.tol = tol;
  return roots_of_polynomial(p, opt);
}

}  // namespace yanglee
