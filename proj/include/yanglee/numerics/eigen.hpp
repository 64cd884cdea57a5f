#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "yanglee/errors.hpp"

namespace yanglee {

/// Right and left eigenvectors are stored column-wise and biorthonormalized so
/// that left.adjoint() * right is the identity for diagonalizable input.
struct EigenSystem {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
  /// max_i ||A r_i - lambda_i r_i|| / ||A||
  double residual = 0.0;
  /// max_ij |<l_i|r_j> - delta_ij|
  double biorthogonality_error = 0.0;
};

namespace detail {

inline bool eig_less(std::complex<double> a, std::complex<double> b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

inline std::vector<Eigen::Index> eig_order(const Eigen::VectorXcd& values) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index i, Eigen::Index j) { return eig_less(values(i), values(j)); });
  return idx;
}

inline void check_finite(const Eigen::MatrixXcd& a, const char* who) {
  if (a.rows() != a.cols() || a.rows() < 1) throw DomainError(std::string(who) + ": matrix must be square and non-empty");
  if (!a.allFinite()) throw DomainError(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace detail

inline constexpr double kEigenResidualTolerance = 1e-10;

/// Full eigendecomposition of a dense complex matrix, sorted by real part and
/// then imaginary part.
///
/// Left vectors are the rows of the inverse right-vector matrix, conjugated.
/// Near an exceptional point that inverse is ill-conditioned, which shows up
/// in biorthogonality_error rather than as an exception.
inline EigenSystem dense_eig(const Eigen::MatrixXcd& a) {
  detail::check_finite(a, "dense_eig");
  const Eigen::Index n = a.rows();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, true);
  const double norm = std::max(a.norm(), std::numeric_limits<double>::min());
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense_eig: eigensolver failed for dimension " + std::to_string(n), {}, INFINITY);
  }
  const auto order = detail::eig_order(solver.eigenvalues());

  EigenSystem es;
  es.values.resize(n);
  es.right.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    es.values(j) = solver.eigenvalues()(src);
    es.right.col(j) = solver.eigenvectors().col(src).normalized();
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const double r = (a * es.right.col(j) - es.values(j) * es.right.col(j)).norm() / norm;
    es.residual = std::max(es.residual, r);
  }
  if (!(es.residual <= kEigenResidualTolerance)) {
    std::vector<cplx> vals(es.values.data(), es.values.data() + n);
    throw ConvergenceError("dense_eig: residual above tolerance for dimension " + std::to_string(n), std::move(vals),
                           es.residual);
  }
  es.left = es.right.partialPivLu().inverse().adjoint();
  const Eigen::MatrixXcd overlap = es.left.adjoint() * es.right - Eigen::MatrixXcd::Identity(n, n);
  es.biorthogonality_error = overlap.cwiseAbs().maxCoeff();
  return es;
}

/// Eigenvalues only, in the same order as dense_eig.
inline Eigen::VectorXcd dense_eigenvalues(const Eigen::MatrixXcd& a) {
  detail::check_finite(a, "dense_eigenvalues");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("dense_eigenvalues: eigensolver failed for dimension " + std::to_string(a.rows()), {},
                           INFINITY);
  }
  const auto order = detail::eig_order(solver.eigenvalues());
  Eigen::VectorXcd out(a.rows());
  for (Eigen::Index j = 0; j < a.rows(); ++j) out(j) = solver.eigenvalues()(order[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace yanglee
