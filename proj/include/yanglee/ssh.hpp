#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "yanglee/detail/fit.hpp"
#include "yanglee/detail/parallel.hpp"
#include "yanglee/errors.hpp"
#include "yanglee/numerics/bessel.hpp"
#include "yanglee/numerics/quadrature.hpp"

namespace yanglee::ssh {

/// Non-Hermitian SSH chain with imaginary staggered potential iu on A and -iu on B,
/// intracell hopping v and intercell hopping w.
struct Params {
  double u = 0.0;
  double v = 1.0;
  double w = 1.0;

  void validate() const {
    if (!(u >= 0.0) || !(v >= 0.0) || !(w >= 0.0)) throw DomainError("ssh::Params: u, v, w must be non-negative");
    if (!(v > 0.0) && !(w > 0.0)) throw DomainError("ssh::Params: v and w cannot both vanish");
    if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(w)) throw DomainError("ssh::Params: non-finite value");
  }
};

/// Chemical potential; fixed, the model is studied at half filling.
inline constexpr double kChemicalPotential = 0.0;

/// Momenta closer than this to an exceptional point are rejected.
inline constexpr double kExceptionalExclusion = 1e-8;

enum class Channel { AA, AB, BA, BB };

inline const char* to_string(Channel c) {
  switch (c) {
    case Channel::AA: return "AA";
    case Channel::AB: return "AB";
    case Channel::BA: return "BA";
    case Channel::BB: return "BB";
  }
  return "?";
}

/// Which band counts as filled where both band energies are purely imaginary.
/// BothBands fills both and is a diagnostic mode.
enum class Filling { ImNeg, ImPos, BothBands };

inline const char* to_string(Filling f) {
  switch (f) {
    case Filling::ImNeg: return "ImNeg";
    case Filling::ImPos: return "ImPos";
    case Filling::BothBands: return "BothBands";
  }
  return "?";
}

/// Off-diagonal Bloch element v_k = v + w e^{-ik}. Valid for complex k.
inline cplx hopping(const Params& p, cplx k) { return p.v + p.w * std::exp(cplx(0, -1) * k); }

/// Analytic continuation of conj(v_k): v + w e^{ik}.
inline cplx hopping_bar(const Params& p, cplx k) { return p.v + p.w * std::exp(cplx(0, 1) * k); }

/// |v_k|^2 = v^2 + w^2 + 2 v w cos k
inline double hopping_abs2(const Params& p, double k) { return p.v * p.v + p.w * p.w + 2.0 * p.v * p.w * std::cos(k); }

inline Eigen::Matrix2cd bloch_hamiltonian(const Params& p, double k) {
  const cplx vk = hopping(p, k);
  Eigen::Matrix2cd h;
  h << cplx(0, p.u), vk, std::conj(vk), cplx(0, -p.u);
  return h;
}

/// Upper band energy E_k = sqrt(|v_k|^2 - u^2) on the principal branch:
/// real and non-negative in the PT-unbroken region, i|E| otherwise.
inline cplx dispersion(const Params& p, double k) {
  const double e2 = hopping_abs2(p, k) - p.u * p.u;
  return e2 >= 0.0 ? cplx(std::sqrt(e2), 0.0) : cplx(0.0, std::sqrt(-e2));
}

// Continuation of E_k into complex k; agrees with dispersion() on the real
// axis wherever E_k^2 > 0.
inline cplx dispersion_continued(const Params& p, cplx k) {
  return std::sqrt(hopping(p, k) * hopping_bar(p, k) - p.u * p.u);
}

enum class PhaseLabel { TrivialPTUnbroken, PTBrokenGapless, TopologicalPTUnbroken, Boundary };

inline const char* to_string(PhaseLabel l) {
  switch (l) {
    case PhaseLabel::TrivialPTUnbroken: return "TrivialPTUnbroken";
    case PhaseLabel::PTBrokenGapless: return "PTBrokenGapless";
    case PhaseLabel::TopologicalPTUnbroken: return "TopologicalPTUnbroken";
    case PhaseLabel::Boundary: return "Boundary";
  }
  return "?";
}

struct PhaseDiagnosis {
  PhaseLabel label = PhaseLabel::Boundary;
  double gap = 0.0;
  /// k_E in (0, pi]; the exceptional points sit at +k_E and -k_E.
  std::optional<double> exceptional_momentum;
  /// Set in the broken phase when no real k_E exists (vw = 0 or u > v + w).
  bool exceptional_momenta_omitted = false;
};

inline std::optional<double> exceptional_momentum(const Params& p) {
  if (!(p.v * p.w > 0.0)) return std::nullopt;
  const double c = (p.u * p.u - p.v * p.v - p.w * p.w) / (2.0 * p.v * p.w);
  if (c < -1.0 || c > 1.0) return std::nullopt;
  return std::acos(c);
}

inline PhaseDiagnosis phase_diagnostics(const Params& p) {
  p.validate();
  PhaseDiagnosis d;
  const double s = p.w - p.v;
  if (std::abs(std::abs(s) - p.u) <= 1e-12) {
    d.label = PhaseLabel::Boundary;
  } else if (s < -p.u) {
    d.label = PhaseLabel::TrivialPTUnbroken;
  } else if (s > p.u) {
    d.label = PhaseLabel::TopologicalPTUnbroken;
  } else {
    d.label = PhaseLabel::PTBrokenGapless;
  }
  if (d.label == PhaseLabel::TrivialPTUnbroken || d.label == PhaseLabel::TopologicalPTUnbroken) {
    d.gap = 2.0 * std::sqrt(s * s - p.u * p.u);
  }
  if (d.label == PhaseLabel::PTBrokenGapless) {
    d.exceptional_momentum = exceptional_momentum(p);
    d.exceptional_momenta_omitted = !d.exceptional_momentum.has_value();
  }
  return d;
}

/// log[(1 + e^{-beta E_k})(1 + e^{beta E_k})], evaluated without overflow.
inline cplx log_mode_partition_factor(const Params& p, double k, double beta) {
  if (!(beta > 0.0)) throw DomainError("log_mode_partition_factor: beta must be positive");
  cplx a = beta * dispersion(p, k);
  if (a.real() < 0.0) a = -a;
  return a + 2.0 * std::log(1.0 + std::exp(-a));
}

/// Z_k = (1 + e^{-beta E_k})(1 + e^{beta E_k}).
inline cplx mode_partition_factor(const Params& p, double k, double beta) {
  if (!(beta > 0.0)) throw DomainError("mode_partition_factor: beta must be positive");
  const cplx a = beta * dispersion(p, k);
  if (std::abs(a.real()) <= 300.0) return (1.0 + std::exp(-a)) * (1.0 + std::exp(a));
  return std::exp(log_mode_partition_factor(p, k, beta));
}

struct ZeroEntry {
  double k = 0.0;
  int n = 0;
  cplx energy;
};

struct ZeroSet {
  double beta = 0.0;
  std::vector<ZeroEntry> entries;
  int chi = 0;
};

/// Solutions of Re E_k = 0, Im E_k = (2n+1) pi / beta with n >= 0 and
/// k in [k_E, pi]. Each n whose target lies in the imaginary range of E_k on
/// that interval contributes one entry; chi is the entry count.
inline ZeroSet yang_lee_root_count(const Params& p, double beta) {
  p.validate();
  if (!(beta > 0.0)) throw DomainError("yang_lee_root_count: beta must be positive");
  ZeroSet out;
  out.beta = beta;
  const double d = p.v - p.w;
  if (!(std::abs(d) < p.u)) return out;

  const double e_max = std::sqrt(p.u * p.u - d * d);
  const double k_lo = exceptional_momentum(p).value_or(0.0);
  const double e_lo = dispersion(p, k_lo).imag();
  for (int n = 0;; ++n) {
    const double target = (2.0 * n + 1.0) * std::numbers::pi / beta;
    if (target > e_max) break;
    if (target < e_lo) continue;
    double lo = k_lo;
    double hi = std::numbers::pi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      if (dispersion(p, mid).imag() < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double e_lo_side = dispersion(p, lo).imag();
    const double e_hi_side = dispersion(p, hi).imag();
    const double k = std::abs(e_lo_side - target) <= std::abs(e_hi_side - target) ? lo : hi;
    out.entries.push_back({k, n, dispersion(p, k)});
  }
  out.chi = static_cast<int>(out.entries.size());
  return out;
}

/// beta/(2 pi) sqrt(u^2 - (v-w)^2) in the broken phase, 0 otherwise.
inline double chi_asymptote(const Params& p, double beta) {
  const double d = p.v - p.w;
  return std::abs(d) < p.u ? beta / (2.0 * std::numbers::pi) * std::sqrt(p.u * p.u - d * d) : 0.0;
}

struct RegionScanOptions {
  double u = 1.0;
  /// v and w are (mean_hopping -+ (w-v)/2).
  double mean_hopping = 1.0;
  std::vector<double> w_minus_v;
  std::vector<double> temperatures;
  int threads = 1;
};

struct RegionCell {
  double w_minus_v = 0.0;
  double temperature = 0.0;
  bool has_zeros = false;
  int chi = 0;
};

/// Edges of the zero region along one temperature row, placed halfway between
/// the last empty cell and the first occupied one. NaN when absent.
struct RegionBoundary {
  double temperature = 0.0;
  double left = std::numeric_limits<double>::quiet_NaN();
  double right = std::numeric_limits<double>::quiet_NaN();
};

struct RegionScan {
  /// Row-major in (temperature, w_minus_v).
  std::vector<RegionCell> cells;
  std::vector<RegionBoundary> boundary;
};

inline RegionScan zeros_region_scan(const RegionScanOptions& opt) {
  if (opt.w_minus_v.empty() || opt.temperatures.empty()) throw DomainError("zeros_region_scan: empty grid");
  for (double t : opt.temperatures) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("zeros_region_scan: temperatures must be positive");
  }
  for (double d : opt.w_minus_v) {
    if (!std::isfinite(d) || std::abs(d) > 2.0 * opt.mean_hopping) {
      throw DomainError("zeros_region_scan: |w - v| exceeds twice the mean hopping");
    }
  }
  const std::size_t nd = opt.w_minus_v.size();
  const std::size_t nt = opt.temperatures.size();
  RegionScan scan;
  scan.cells.resize(nd * nt);
  yanglee::detail::parallel_for(nd * nt, opt.threads, [&](std::size_t idx) {
    const double t = opt.temperatures[idx / nd];
    const double d = opt.w_minus_v[idx % nd];
    const Params p{opt.u, opt.mean_hopping - 0.5 * d, opt.mean_hopping + 0.5 * d};
    const int chi = yang_lee_root_count(p, 1.0 / t).chi;
    scan.cells[idx] = RegionCell{d, t, chi > 0, chi};
  });
  for (std::size_t r = 0; r < nt; ++r) {
    RegionBoundary b;
    b.temperature = opt.temperatures[r];
    for (std::size_t c = 1; c < nd; ++c) {
      const auto& prev = scan.cells[r * nd + c - 1];
      const auto& cur = scan.cells[r * nd + c];
      if (!prev.has_zeros && cur.has_zeros && std::isnan(b.left)) b.left = 0.5 * (prev.w_minus_v + cur.w_minus_v);
      if (prev.has_zeros && !cur.has_zeros) b.right = 0.5 * (prev.w_minus_v + cur.w_minus_v);
    }
    scan.boundary.push_back(b);
  }
  return scan;
}

namespace detail {

// 1/(e^{beta lambda} + 1); throws at the poles e^{beta lambda} = -1.
inline cplx fermi(cplx lambda, double beta) {
  const cplx a = beta * lambda;
  cplx out;
  if (a.real() > 0.0) {
    const cplx t = std::exp(-a);
    const cplx den = 1.0 + t;
    if (std::abs(den) < 1e-14) throw SingularityError("fermi: pole of the occupation function");
    out = t / den;
  } else {
    const cplx den = 1.0 + std::exp(a);
    if (std::abs(den) < 1e-14) throw SingularityError("fermi: pole of the occupation function");
    out = 1.0 / den;
  }
  return out;
}

// Ground-state occupation of a band with energy lambda.
inline double occupation(cplx lambda, Filling filling) {
  if (lambda.real() < 0.0) return 1.0;
  if (lambda.real() > 0.0) return 0.0;
  switch (filling) {
    case Filling::ImNeg: return lambda.imag() < 0.0 ? 1.0 : 0.0;
    case Filling::ImPos: return lambda.imag() > 0.0 ? 1.0 : 0.0;
    case Filling::BothBands: return 1.0;
  }
  return 0.0;
}

inline void check_exceptional(const Params& p, double k) {
  if (const auto ke = exceptional_momentum(p)) {
    const double r = std::remainder(std::abs(k), 2.0 * std::numbers::pi);
    if (std::abs(std::abs(r) - *ke) < kExceptionalExclusion) {
      throw SingularityError("corr_momentum: momentum at an exceptional point");
    }
  }
}

// Channel formula given E, occupations f(E) and f(-E), and v_k, conj(v_k).
inline cplx channel_value(Channel ch, double u, cplx e, cplx f_plus, cplx f_minus, cplx vk, cplx vk_bar) {
  const cplx c = cplx(0, u) / e;  // cos(phi_k)
  switch (ch) {
    case Channel::AA: return 0.5 * (1.0 + c) * f_plus + 0.5 * (1.0 - c) * f_minus;
    case Channel::BB: return 0.5 * (1.0 - c) * f_plus + 0.5 * (1.0 + c) * f_minus;
    case Channel::AB: return vk_bar / (2.0 * e) * (f_plus - f_minus);
    case Channel::BA: return vk / (2.0 * e) * (f_plus - f_minus);
  }
  return {};
}

}  // namespace detail

/// Momentum-space left-right correlation <c^dag_{k alpha} c_{k beta}>.
///
/// With cos phi_k = iu/E_k and sin phi_k = |v_k|/E_k:
///   C_AA = cos^2(phi/2) f(E) + sin^2(phi/2) f(-E)
///   C_BB = sin^2(phi/2) f(E) + cos^2(phi/2) f(-E)
///   C_AB = (v_k^*/|v_k|) cos(phi/2) sin(phi/2) (f(E) - f(-E)),  C_BA likewise with v_k
/// where f(E) = 1/(e^{beta E}+1). beta = infinity selects the ground state,
/// with `filling` deciding occupancy where E_k is purely imaginary.
inline cplx corr_momentum(const Params& p, double k, double beta, Channel ch, Filling filling = Filling::ImNeg) {
  p.validate();
  if (!(beta > 0.0)) throw DomainError("corr_momentum: beta must be positive");
  detail::check_exceptional(p, k);
  const cplx e = dispersion(p, k);
  if (e == cplx{}) throw SingularityError("corr_momentum: E_k = 0");
  cplx fp, fm;
  if (std::isinf(beta)) {
    fp = detail::occupation(e, filling);
    fm = detail::occupation(-e, filling);
  } else {
    fp = detail::fermi(e, beta);
    fm = detail::fermi(-e, beta);
  }
  const cplx vk = hopping(p, k);
  return detail::channel_value(ch, p.u, e, fp, fm, vk, std::conj(vk));
}

inline constexpr double kZeroTemperature = std::numeric_limits<double>::infinity();

/// Inverse decay length kappa of ground-state correlations in the gapped
/// phase: cosh kappa = (v^2 + w^2 - u^2) / (2 v w). The branch points of E_k
/// sit at k = pi +- i kappa.
inline double decay_rate(const Params& p) {
  p.validate();
  if (!(std::abs(p.v - p.w) > p.u)) throw DomainError("decay_rate: requires the gapped phase |v - w| > u");
  if (!(p.v * p.w > 0.0)) return std::numeric_limits<double>::infinity();
  return std::acosh((p.v * p.v + p.w * p.w - p.u * p.u) / (2.0 * p.v * p.w));
}

struct CorrRealOptions {
  double tol = 1e-9;
  Filling filling = Filling::ImNeg;
  /// Shift the integration path to Im k = +-eta to tame cancellation at large |x|.
  bool contour_shift = true;
};

/// Ground-state real-space correlation C(x) = int_{-pi}^{pi} dk/2pi C(k) e^{ikx}.
///
/// In the gapped phase the integrand is analytic in the strip |Im k| < kappa
/// and periodic, so the path is moved to Im k = sign(x) eta with
/// eta = max(0, kappa - 1/|x|); this leaves the value unchanged and makes the
/// integrand of size e^{-eta |x|}, so `tol` acts relative to that scale. In
/// the broken phase the real axis is used with breakpoints at +-k_E.
inline cplx corr_real(const Params& p, int x, Channel ch, const CorrRealOptions& opt = {}) {
  p.validate();
  const bool gapped = std::abs(p.v - p.w) > p.u;
  QuadratureOptions qo;
  qo.oscillation = std::abs(x);
  qo.max_subdivisions = 20000;
  if (!gapped) {
    qo.abs_tol = opt.tol;
    if (const auto ke = exceptional_momentum(p)) qo.breakpoints = {-*ke, *ke};
    auto f = [&](double k) {
      return corr_momentum(p, k, kZeroTemperature, ch, opt.filling) * std::exp(cplx(0, k * x));
    };
    return adaptive_integrate(f, -std::numbers::pi, std::numbers::pi, qo).value / (2.0 * std::numbers::pi);
  }

  double eta = 0.0;
  if (opt.contour_shift && x != 0) {
    const double kappa = decay_rate(p);
    eta = std::isfinite(kappa) ? std::max(0.0, kappa - 1.0 / std::abs(x)) : 1.0;
  }
  const double sgn = x >= 0 ? 1.0 : -1.0;
  qo.abs_tol = opt.tol * std::exp(-eta * std::abs(x));
  qo.breakpoints = {0.0};
  auto f = [&](double t) {
    const cplx k(t, sgn * eta);
    const cplx e = dispersion_continued(p, k);
    // Gapped ground state: lower band filled.
    const cplx val = detail::channel_value(ch, p.u, e, 0.0, 1.0, hopping(p, k), hopping_bar(p, k));
    return val * std::exp(cplx(0, 1) * k * static_cast<double>(x));
  };
  return adaptive_integrate(f, -std::numbers::pi, std::numbers::pi, qo).value / (2.0 * std::numbers::pi);
}

/// delta = |v - w| - u
inline double critical_distance(const Params& p) { return std::abs(p.v - p.w) - p.u; }

/// Closed-form correlation length xi = v w / (2 u delta).
inline double correlation_length(const Params& p) {
  p.validate();
  const double delta = critical_distance(p);
  if (!(delta > 0.0)) throw DomainError("correlation_length: requires delta = |v - w| - u > 0");
  if (!(p.u > 0.0)) throw DomainError("correlation_length: requires u > 0");
  return p.v * p.w / (2.0 * p.u * delta);
}

/// Near-critical closed forms with delta = |v-w| - u and xi = vw/(2u delta):
///   C_AA = -e^{i pi x} iu / (2 pi sqrt(2u delta) xi) K0(x/xi)
///   C_BB = -C_AA
///   C_AB = C_BA = -(1/(2 pi xi)) sqrt(2 delta/u) K0(x/xi)
inline cplx corr_asymptotic(const Params& p, double x, Channel ch) {
  if (!(x > 0.0)) throw DomainError("corr_asymptotic: x must be positive");
  const double xi = correlation_length(p);
  const double delta = critical_distance(p);
  const double k0 = bessel_k0(x / xi);
  const cplx phase = std::exp(cplx(0, std::numbers::pi * x));
  const cplx diag = phase * cplx(0, p.u) / (2.0 * std::numbers::pi * std::sqrt(2.0 * p.u * delta) * xi) * k0;
  switch (ch) {
    case Channel::AA: return -diag;
    case Channel::BB: return diag;
    case Channel::AB:
    case Channel::BA: return -std::sqrt(2.0 * delta / p.u) / (2.0 * std::numbers::pi * xi) * k0;
  }
  return {};
}

struct DecayFit {
  double xi = 0.0;
  /// Exponent p in |C| ~ e^{-x/xi} x^p.
  double power = 0.0;
  double amplitude = 0.0;
  double rms_residual = 0.0;
};

/// Fits log|C(x)| = a - x/xi + p log x by least squares. With known_xi the
/// decay length is held fixed and only a and p are fitted.
inline DecayFit fit_decay(const std::vector<double>& x, const std::vector<double>& abs_c,
                          std::optional<double> known_xi = std::nullopt) {
  if (x.size() != abs_c.size() || x.size() < 4) throw DomainError("fit_decay: need at least four matched samples");
  if (known_xi && !(*known_xi > 0.0)) throw DomainError("fit_decay: known xi must be positive");
  const Eigen::Index cols = known_xi ? 2 : 3;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(x.size()), cols);
  Eigen::VectorXd y(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(abs_c[i] > 0.0)) throw DomainError("fit_decay: samples must be positive");
    const auto r = static_cast<Eigen::Index>(i);
    a(r, 0) = 1.0;
    a(r, cols - 1) = std::log(x[i]);
    y(r) = std::log(abs_c[i]);
    if (known_xi) {
      y(r) += x[i] / *known_xi;
    } else {
      a(r, 1) = x[i];
    }
  }
  DecayFit f;
  const Eigen::VectorXd c = yanglee::detail::least_squares(a, y, &f.rms_residual);
  f.amplitude = std::exp(c(0));
  f.xi = known_xi ? *known_xi : -1.0 / c(1);
  f.power = c(cols - 1);
  return f;
}

struct ExponentRow {
  double delta = 0.0;
  double xi_fit = 0.0;
  double xi_formula = 0.0;
  double power = 0.0;
  double rms_residual = 0.0;
};

struct ExponentFit {
  double nu = 0.0;
  double eta = 0.0;
  double mean_power = 0.0;
  std::vector<ExponentRow> xi_table;
  /// Set when a per-delta decay fit or the nu regression is poor.
  bool warning = false;
};

struct ExponentFitOptions {
  double u = 1.0;
  double w = 1.0;
  std::vector<double> deltas{0.02, 0.05, 0.1};
  /// Fit window in units of the closed-form xi.
  double x_min_over_xi = 2.0;
  double x_max_over_xi = 6.0;
  int samples = 40;
  Channel channel = Channel::AA;
  int threads = 1;
  double residual_warning = 0.05;
};

/// Critical exponents from ground-state correlations at v = w + u + delta.
/// nu is the slope of log(1/xi_fit) against log(delta); eta = 1 - p with p the
/// mean fitted power, from |C| ~ e^{-x/xi} / x^{d-2+eta} at d = 1.
inline ExponentFit fit_exponents(const ExponentFitOptions& opt) {
  if (opt.deltas.size() < 2) throw DomainError("fit_exponents: need at least two delta values");
  if (opt.samples < 4) throw DomainError("fit_exponents: need at least four samples per delta");
  ExponentFit out;
  out.xi_table.resize(opt.deltas.size());
  yanglee::detail::parallel_for(opt.deltas.size(), opt.threads, [&](std::size_t i) {
    const double delta = opt.deltas[i];
    if (!(delta > 0.0)) throw DomainError("fit_exponents: delta must be positive");
    const Params p{opt.u, opt.w + opt.u + delta, opt.w};
    const double xi = correlation_length(p);
    std::vector<double> xs, cs;
    const double lo = opt.x_min_over_xi * xi;
    const double hi = opt.x_max_over_xi * xi;
    int last = -1;
    for (int s = 0; s < opt.samples; ++s) {
      const int x = static_cast<int>(std::lround(lo + (hi - lo) * s / (opt.samples - 1)));
      if (x < 1 || x == last) continue;
      last = x;
      xs.push_back(x);
      cs.push_back(std::abs(corr_real(p, x, opt.channel)));
    }
    const auto f = fit_decay(xs, cs);
    out.xi_table[i] = ExponentRow{delta, f.xi, xi, f.power, f.rms_residual};
  });
  std::vector<double> ld, lxi;
  for (const auto& row : out.xi_table) {
    ld.push_back(std::log(row.delta));
    lxi.push_back(std::log(1.0 / row.xi_fit));
    out.mean_power += row.power / static_cast<double>(out.xi_table.size());
    if (row.rms_residual > opt.residual_warning || !(row.xi_fit > 0.0)) out.warning = true;
  }
  const auto lf = yanglee::detail::linear_fit(ld, lxi);
  out.nu = lf.slope;
  out.eta = 1.0 - out.mean_power;
  if (lf.r_squared < 0.99) out.warning = true;
  return out;
}

}  // namespace yanglee::ssh
