#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <numbers>
#include <random>

#include "yanglee/numerics/quadrature.hpp"

using yanglee::adaptive_integrate;
using yanglee::cplx;

TEST(AdaptiveIntegrate, CosineOverHalfPeriod) {
  auto r = adaptive_integrate([](double k) { return cplx(std::cos(k)); }, 0.0, std::numbers::pi, 1e-12);
  EXPECT_NEAR(std::abs(r.value), 0.0, 1e-12);
}

TEST(AdaptiveIntegrate, Polynomial) {
  auto r = adaptive_integrate([](double k) { return cplx(k * k, -k); }, 0.0, 2.0, 1e-12);
  EXPECT_NEAR(r.value.real(), 8.0 / 3.0, 1e-13);
  EXPECT_NEAR(r.value.imag(), -2.0, 1e-13);
}

TEST(AdaptiveIntegrate, EndpointSingularity) {
  auto r = adaptive_integrate([](double k) { return cplx(1.0 / std::sqrt(k)); }, 0.0, 1.0, 1e-9);
  EXPECT_NEAR(r.value.real(), 2.0, 1e-8);
}

TEST(AdaptiveIntegrate, SplitSumMatchesWhole) {
  const double u = 1.0, v = 1.0, w = 1.0, delta = 0.1;
  auto f = [&](double k) { return cplx(1.0 / std::sqrt(2 * u * delta + 2 * v * w * (1 + std::cos(k)))); };
  const double whole = adaptive_integrate(f, 0.0, std::numbers::pi, 1e-13).value.real();
  const double a = adaptive_integrate(f, 0.0, std::numbers::pi / 2, 1e-13).value.real();
  const double b = adaptive_integrate(f, std::numbers::pi / 2, std::numbers::pi, 1e-13).value.real();
  EXPECT_NEAR(whole, a + b, 1e-10);
}

TEST(AdaptiveIntegrate, LinearityAndAdditivityOnRandomIntegrands) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a1 = ud(rng), a2 = ud(rng), f1 = 3 * ud(rng), f2 = 3 * ud(rng), alpha = ud(rng);
    auto g = [&](double k) { return cplx(std::sin(f1 * k) * std::exp(a1 * k), std::cos(f2 * k)); };
    auto h = [&](double k) { return cplx(std::exp(a2 * k * k), k); };
    auto gh = [&](double k) { return g(k) + alpha * h(k); };
    const double lo = -1.0, mid = ud(rng) * 0.4, hi = 1.5;
    const cplx ig = adaptive_integrate(g, lo, hi, 1e-12).value;
    const cplx ih = adaptive_integrate(h, lo, hi, 1e-12).value;
    const cplx igh = adaptive_integrate(gh, lo, hi, 1e-12).value;
    EXPECT_NEAR(std::abs(igh - ig - alpha * ih), 0.0, 1e-10);
    const cplx left = adaptive_integrate(g, lo, mid, 1e-12).value;
    const cplx right = adaptive_integrate(g, mid, hi, 1e-12).value;
    EXPECT_NEAR(std::abs(left + right - ig), 0.0, 1e-10);
  }
}

TEST(AdaptiveIntegrate, OscillatoryPanels) {
  yanglee::QuadratureOptions opt;
  opt.abs_tol = 1e-11;
  opt.oscillation = 200.0;
  auto r = adaptive_integrate([](double k) { return cplx(std::cos(200.0 * k) * std::exp(-k)); }, 0.0, 5.0, opt);
  const double exact = (1.0 - std::exp(-5.0) * (std::cos(1000.0) - 200.0 * std::sin(1000.0))) / (1.0 + 40000.0);
  EXPECT_NEAR(r.value.real(), exact, 1e-11);
}

TEST(AdaptiveIntegrate, ReportsPartialResultOnExhaustion) {
  yanglee::QuadratureOptions opt;
  opt.abs_tol = 1e-14;
  opt.max_subdivisions = 3;
  try {
    adaptive_integrate([](double k) { return cplx(std::log(k)); }, 0.0, 1.0, opt);
    FAIL() << "expected QuadratureError";
  } catch (const yanglee::QuadratureError& e) {
    EXPECT_NEAR(e.partial_result().real(), -1.0, 1e-2);
    EXPECT_GT(e.error_estimate(), 1e-14);
  }
}

TEST(AdaptiveIntegrate, RejectsEmptyInterval) {
  EXPECT_THROW(adaptive_integrate([](double) { return cplx(1.0); }, 1.0, 1.0, 1e-8), yanglee::DomainError);
}

TEST(FourierCosineIntegral, ReproducesBesselIdentity) {
  for (double xi : {0.5, 1.0, 4.0}) {
    const double x = 2.0 * xi;
    auto r = yanglee::fourier_cosine_integral([&](double k) { return 1.0 / std::sqrt(1.0 + xi * xi * k * k); }, x,
                                              50.0 / xi, 1e-10);
    EXPECT_NEAR(r.value.real(), boost::math::cyl_bessel_k(0, x / xi) / xi, 1e-6) << xi;
    EXPECT_LE(r.tail_error, 1e-6);
  }
}

TEST(FourierCosineIntegral, ExponentialTransform) {
  // int_0^inf cos(kx)/(1+k^2) dk = (pi/2) e^{-x}
  for (double x : {0.5, 3.0, 10.0}) {
    auto r = yanglee::fourier_cosine_integral([](double k) { return 1.0 / (1.0 + k * k); }, x, 30.0, 1e-11);
    EXPECT_NEAR(r.value.real(), 0.5 * std::numbers::pi * std::exp(-x), 1e-8) << x;
  }
}
