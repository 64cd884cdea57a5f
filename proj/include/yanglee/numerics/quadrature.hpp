#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

#include "yanglee/errors.hpp"

namespace yanglee {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_subdivisions = 4000;
  /// Interior points where the integrand has kinks or near-singular behavior.
  std::vector<double> breakpoints;
  /// Angular frequency of an oscillatory factor such as cos(omega k). The
  /// initial partition uses one panel per half period.
  double oscillation = 0.0;
  /// Upper limit on the number of initial oscillation panels.
  int max_initial_panels = 2000;
};

struct QuadratureResult {
  cplx value;
  double error = 0.0;
  int evaluations = 0;
  int intervals = 0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes on [-1, 1] (non-negative half, center last).
inline constexpr std::array<double, 8> kGK15Nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kGK15Weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss 7-point weights for nodes kGK15Nodes[1], [3], [5] and the center.
inline constexpr std::array<double, 4> kG7Weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cplx value;
  double error;
  double abs_integral;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(F& f, double a, double b, int& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kron = fc * kGK15Weights[7];
  cplx gauss = fc * kG7Weights[3];
  double abs_sum = std::abs(fc) * kGK15Weights[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kGK15Nodes[static_cast<std::size_t>(j)];
    const cplx f1 = f(c - dx);
    const cplx f2 = f(c + dx);
    kron += kGK15Weights[static_cast<std::size_t>(j)] * (f1 + f2);
    abs_sum += kGK15Weights[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) gauss += kG7Weights[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  evals += 15;
  const double err = std::abs((kron - gauss) * h);
  const double floor = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::abs(h);
  return Segment{a, b, kron * h, std::max(err, floor), abs_sum * std::abs(h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod 7-15 quadrature of a complex-valued
/// integrand over [a, b].
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate falls below max(abs_tol, rel_tol * |I|). Integrable endpoint
/// singularities are tolerated because the rule never samples the endpoints.
/// Throws QuadratureError with the partial result when max_subdivisions is
/// exhausted.
template <class F>
QuadratureResult adaptive_integrate(F&& f, double a, double b, const QuadratureOptions& opt) {
  if (!(a < b)) throw DomainError("adaptive_integrate: requires a < b");
  if (!(opt.abs_tol > 0.0) && !(opt.rel_tol > 0.0)) throw DomainError("adaptive_integrate: tolerance must be positive");

  std::vector<double> cuts{a};
  for (double p : opt.breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<detail::Segment> heap;
  QuadratureResult res;
  cplx total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    int panels = 1;
    if (opt.oscillation > 0.0) {
      const double half_periods = (hi - lo) * opt.oscillation / std::numbers::pi;
      panels = static_cast<int>(std::clamp(std::ceil(half_periods), 1.0, static_cast<double>(opt.max_initial_panels)));
    }
    const double w = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double s0 = lo + p * w;
      const double s1 = (p + 1 == panels) ? hi : lo + (p + 1) * w;
      auto seg = detail::gk15(f, s0, s1, res.evaluations);
      total += seg.value;
      total_err += seg.error;
      heap.push(seg);
    }
  }

  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * std::abs(total)); };
  int splits = 0;
  while (total_err > target()) {
    if (splits >= opt.max_subdivisions || heap.empty()) {
      throw QuadratureError("adaptive_integrate: subdivision limit reached", total, total_err);
    }
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("adaptive_integrate: interval too small to bisect", total, total_err);
    }
    heap.pop();
    auto left = detail::gk15(f, worst.a, mid, res.evaluations);
    auto right = detail::gk15(f, mid, worst.b, res.evaluations);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }

  // Re-sum to shed the drift accumulated by the incremental updates.
  cplx sum{};
  double err = 0.0;
  res.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  res.value = sum;
  res.error = err;
  return res;
}

template <class F>
QuadratureResult adaptive_integrate(F&& f, double a, double b, double tol) {
  QuadratureOptions opt;
  opt.abs_tol = tol;
  return adaptive_integrate(std::forward<F>(f), a, b, opt);
}

struct FourierIntegralResult {
  cplx value;
  /// Combined quadrature and extrapolation error estimate.
  double error = 0.0;
  /// Contribution from [k_max, infinity).
  cplx tail;
  /// Estimated error of the tail extrapolation alone.
  double tail_error = 0.0;
};

/// Integral of g(k) cos(k x) over [0, infinity) for x > 0 and g slowly
/// decaying.
///
/// [0, k_max] is integrated adaptively with half-period panels. The tail is
/// written as an alternating series of half-period panel integrals whose
/// partial sums are accelerated by repeated averaging.
template <class G>
FourierIntegralResult fourier_cosine_integral(G&& g, double x, double k_max, double tol, int tail_panels = 48) {
  if (!(x > 0.0)) throw DomainError("fourier_cosine_integral: x must be positive");
  if (!(k_max > 0.0)) throw DomainError("fourier_cosine_integral: k_max must be positive");
  auto integrand = [&](double k) -> cplx { return cplx(g(k)) * std::cos(k * x); };

  QuadratureOptions opt;
  opt.abs_tol = 0.25 * tol;
  opt.oscillation = x;
  const auto head = adaptive_integrate(integrand, 0.0, k_max, opt);

  const double half = std::numbers::pi / x;
  // Align the tail with a zero of cos(k x) so the panels alternate in sign.
  const double k0 = (std::ceil(k_max / half - 0.5) + 0.5) * half;
  QuadratureOptions panel_opt;
  panel_opt.abs_tol = 0.25 * tol / (tail_panels + 1);
  cplx lead{};
  if (k0 > k_max) lead = adaptive_integrate(integrand, k_max, k0, panel_opt).value;

  std::vector<cplx> partial;
  partial.reserve(static_cast<std::size_t>(tail_panels));
  cplx acc{};
  for (int n = 0; n < tail_panels; ++n) {
    acc += adaptive_integrate(integrand, k0 + n * half, k0 + (n + 1) * half, panel_opt).value;
    partial.push_back(acc);
  }
  // Iterated averaging of successive partial sums.
  std::vector<cplx> level = partial;
  cplx prev_estimate = level.back();
  double extrap_err = std::abs(level.back() - level[level.size() - 2]);
  while (level.size() > 2) {
    std::vector<cplx> next(level.size() - 1);
    for (std::size_t i = 0; i + 1 < level.size(); ++i) next[i] = 0.5 * (level[i] + level[i + 1]);
    extrap_err = std::abs(next.back() - prev_estimate);
    prev_estimate = next.back();
    level = std::move(next);
  }

  FourierIntegralResult out;
  out.tail = lead + prev_estimate;
  out.tail_error = extrap_err;
  out.value = head.value + out.tail;
  out.error = head.error + extrap_err + panel_opt.abs_tol * (tail_panels + 1);
  return out;
}

}  // namespace yanglee
