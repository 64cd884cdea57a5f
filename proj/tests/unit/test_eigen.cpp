#include <gtest/gtest.h>

#include <random>

#include "yanglee/numerics/eigen.hpp"

using yanglee::cplx;
using yanglee::dense_eig;

namespace {

Eigen::MatrixXcd random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
  return a;
}

}  // namespace

TEST(DenseEig, DiagonalSorted) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 3.0;
  a(1, 1) = cplx(1.0, 2.0);
  auto es = dense_eig(a);
  EXPECT_EQ(es.values(0), cplx(1.0, 2.0));
  EXPECT_EQ(es.values(1), cplx(3.0));
}

TEST(DenseEig, BlochMatrixAtGapClosingMomentum) {
  const double u = 1.0, v = 1.0, w = 1.0, k = M_PI;
  const cplx vk = v + w * std::exp(cplx(0, -k));
  Eigen::MatrixXcd h(2, 2);
  h << cplx(0, u), vk, std::conj(vk), cplx(0, -u);
  auto es = dense_eig(h);
  EXPECT_NEAR(std::abs(es.values(0) - cplx(0, -1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(es.values(1) - cplx(0, 1)), 0.0, 1e-12);
}

TEST(DenseEig, TraceAndDeterminantIdentities) {
  for (int n : {1, 5, 50, 100}) {
    const auto a = random_matrix(n, 100 + static_cast<std::uint64_t>(n));
    auto es = dense_eig(a);
    EXPECT_LE(es.residual, 1e-10);
    const cplx tr = a.trace();
    EXPECT_NEAR(std::abs(es.values.sum() - tr), 0.0, 1e-9 * std::max(1.0, std::abs(tr))) << n;
    if (n <= 50) {
      const cplx det = a.determinant();
      EXPECT_NEAR(std::abs(es.values.prod() - det), 0.0, 1e-8 * std::abs(det)) << n;
    }
    EXPECT_LE(es.biorthogonality_error, 1e-8);
    for (Eigen::Index j = 1; j < n; ++j) {
      EXPECT_TRUE(es.values(j - 1).real() < es.values(j).real() ||
                  (es.values(j - 1).real() == es.values(j).real() && es.values(j - 1).imag() <= es.values(j).imag()));
    }
  }
}

TEST(DenseEig, LeftVectorsSatisfyAdjointEquation) {
  const auto a = random_matrix(20, 3);
  auto es = dense_eig(a);
  for (Eigen::Index j = 0; j < 20; ++j) {
    const Eigen::VectorXcd l = es.left.col(j);
    EXPECT_LE((a.adjoint() * l - std::conj(es.values(j)) * l).norm(), 1e-9 * a.norm() * l.norm());
  }
}

TEST(DenseEig, EigenvaluesOnlyAgree) {
  const auto a = random_matrix(30, 9);
  EXPECT_LE((yanglee::dense_eigenvalues(a) - dense_eig(a).values).norm(), 1e-10);
}

TEST(DenseEig, RejectsBadInput) {
  EXPECT_THROW(dense_eig(Eigen::MatrixXcd(2, 3)), yanglee::DomainError);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(dense_eig(a), yanglee::DomainError);
}
