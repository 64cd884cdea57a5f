#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "yanglee/detail/fit.hpp"
#include "yanglee/detail/parallel.hpp"
#include "yanglee/errors.hpp"
#include "yanglee/numerics/eigen.hpp"
#include "yanglee/ssh.hpp"

namespace yanglee::entanglement {

using ssh::Filling;

/// LR: <G_L| c^dag c |G_R> (biorthogonal). RR: <G_R| c^dag c |G_R> / <G_R|G_R>.
enum class Convention { LR, RR };

inline const char* to_string(Convention c) { return c == Convention::LR ? "LR" : "RR"; }

/// Two-point function on a block of L_A unit cells, index 2 i + alpha with
/// alpha = 0 (A) or 1 (B).
struct CorrelationMatrix {
  Eigen::MatrixXcd entries;
  Convention convention = Convention::LR;
  Filling filling = Filling::ImNeg;
  int subsystem_cells = 0;
  /// Offset of the momentum grid in units of 2 pi / L.
  double grid_offset = 0.5;
};

struct EEResult {
  cplx S;
  double S_real = 0.0;
  Eigen::VectorXcd eigenvalues;
  int subsystem_length = 0;
};

namespace detail {

// Band selection for one momentum: +1 upper (E_k), -1 lower (-E_k), 0 both.
inline int filled_band(cplx e, Filling filling) {
  if (filling == Filling::BothBands) return 0;
  if (e.real() > 0.0) return -1;
  return filling == Filling::ImPos ? +1 : -1;
}

inline Eigen::Matrix2cd band_projector(const ssh::Params& p, double k, Filling filling, Convention conv) {
  const Eigen::Matrix2cd h = ssh::bloch_hamiltonian(p, k);
  const int band = filled_band(ssh::dispersion(p, k), filling);
  if (band == 0) return Eigen::Matrix2cd::Identity();
  const cplx lambda = static_cast<double>(band) * ssh::dispersion(p, k);
  // Biorthogonal projector (H + lambda)/(2 lambda) onto the lambda eigenspace.
  const Eigen::Matrix2cd lr = (h + lambda * Eigen::Matrix2cd::Identity()) / (2.0 * lambda);
  if (conv == Convention::LR) return lr;
  // Any nonzero column of the projector spans the right eigenvector.
  Eigen::Vector2cd r = lr.col(0).norm() >= lr.col(1).norm() ? lr.col(0) : lr.col(1);
  r.normalize();
  return r * r.adjoint();
}

inline bool grid_hits_singularity(const ssh::Params& p, int L, double offset) {
  for (int m = 0; m < L; ++m) {
    const double k = 2.0 * std::numbers::pi * (m + offset) / L;
    if (std::abs(ssh::dispersion(p, k)) < ssh::kExceptionalExclusion) return true;
    if (const auto ke = ssh::exceptional_momentum(p)) {
      const double r = std::abs(std::remainder(k, 2.0 * std::numbers::pi));
      if (std::abs(r - *ke) < ssh::kExceptionalExclusion) return true;
    }
  }
  return false;
}

}  // namespace detail

/// Ground-state correlation matrix of a block of L_A cells in a ring of L
/// cells:
///   C_{i alpha, j beta} = (1/L) sum_m e^{i k_m (i - j)} P(k_m)_{alpha beta}
/// with k_m = 2 pi (m + 1/2)/L and P(k) the projector onto the filled band:
/// the band with Re E < 0, or on the Re E = 0 set the band picked by
/// `filling`. If the grid meets an exceptional point it is shifted by half a
/// cell; SingularityError if both grids fail.
inline CorrelationMatrix ssh_correlation_matrix(const ssh::Params& p, int L, int L_A, Filling filling = Filling::ImNeg,
                                                Convention conv = Convention::LR) {
  p.validate();
  if (L < 2 || L % 2 != 0) throw DomainError("ssh_correlation_matrix: L must be even and >= 2");
  if (L_A < 1 || L_A > L / 2) throw DomainError("ssh_correlation_matrix: need 1 <= L_A <= L/2");
  double offset = 0.5;
  if (detail::grid_hits_singularity(p, L, offset)) {
    offset = 0.0;
    if (detail::grid_hits_singularity(p, L, offset)) {
      throw SingularityError("ssh_correlation_matrix: both momentum grids meet an exceptional point");
    }
  }
  std::vector<double> ks(static_cast<std::size_t>(L));
  std::vector<Eigen::Matrix2cd> proj(static_cast<std::size_t>(L));
  for (int m = 0; m < L; ++m) {
    ks[static_cast<std::size_t>(m)] = 2.0 * std::numbers::pi * (m + offset) / L;
    proj[static_cast<std::size_t>(m)] = detail::band_projector(p, ks[static_cast<std::size_t>(m)], filling, conv);
  }
  // Translation invariance: blocks depend on i - j only.
  std::vector<Eigen::Matrix2cd> block(static_cast<std::size_t>(2 * L_A - 1), Eigen::Matrix2cd::Zero());
  for (int d = -(L_A - 1); d <= L_A - 1; ++d) {
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    for (int m = 0; m < L; ++m) {
      acc += std::exp(cplx(0, ks[static_cast<std::size_t>(m)] * d)) * proj[static_cast<std::size_t>(m)];
    }
    block[static_cast<std::size_t>(d + L_A - 1)] = acc / static_cast<double>(L);
  }
  CorrelationMatrix c;
  c.entries.resize(2 * L_A, 2 * L_A);
  for (int i = 0; i < L_A; ++i) {
    for (int j = 0; j < L_A; ++j) c.entries.block<2, 2>(2 * i, 2 * j) = block[static_cast<std::size_t>(i - j + L_A - 1)];
  }
  c.convention = conv;
  c.filling = filling;
  c.subsystem_cells = L_A;
  c.grid_offset = offset;
  return c;
}

/// h(x) = -((1+x)/2) log((1+x)/2) - ((1-x)/2) log((1-x)/2), principal logs;
/// a term whose argument is within 1e-14 of zero contributes its limit 0.
inline cplx h_function(cplx x) {
  cplx out{};
  for (double s : {1.0, -1.0}) {
    const cplx y = 0.5 * (1.0 + s * x);
    if (std::abs(1.0 + s * x) >= 1e-14) out -= y * std::log(y);
  }
  return out;
}

/// S = sum_i h(lambda_i) over the eigenvalues of gamma = I - 2C.
inline EEResult ee_from_correlation(const CorrelationMatrix& c) {
  const Eigen::Index n = c.entries.rows();
  if (n == 0 || n % 2 != 0 || c.entries.cols() != n) throw DomainError("ee_from_correlation: dimension must be even");
  const Eigen::MatrixXcd gamma = Eigen::MatrixXcd::Identity(n, n) - 2.0 * c.entries;
  EEResult r;
  r.eigenvalues = dense_eigenvalues(gamma);
  r.S = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) r.S += h_function(r.eigenvalues(i));
  r.S_real = r.S.real();
  r.subsystem_length = c.subsystem_cells;
  return r;
}

enum class ScalingLaw { SubareaLaw, AreaLaw, Unclassified };

inline const char* to_string(ScalingLaw s) {
  switch (s) {
    case ScalingLaw::SubareaLaw: return "SubareaLaw";
    case ScalingLaw::AreaLaw: return "AreaLaw";
    case ScalingLaw::Unclassified: return "Unclassified";
  }
  return "?";
}

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  ScalingLaw classification = ScalingLaw::Unclassified;
  std::vector<int> subsystems;
  std::vector<cplx> entropies;
};

inline constexpr double kAreaLawSlope = 0.05;

/// Least-squares fit of Re S against ln L_A. SubareaLaw for slope > 0.05,
/// AreaLaw for |slope| <= 0.05, Unclassified below -0.05.
inline ScalingFit ee_scaling_fit(const ssh::Params& p, int L, const std::vector<int>& subsystems,
                                 Filling filling = Filling::ImNeg, Convention conv = Convention::LR,
                                 int threads = 1) {
  if (subsystems.size() < 5) throw DomainError("ee_scaling_fit: need at least five subsystem sizes");
  int lo = subsystems.front(), hi = subsystems.front();
  for (int la : subsystems) {
    lo = std::min(lo, la);
    hi = std::max(hi, la);
  }
  if (hi < 4 * lo) throw DomainError("ee_scaling_fit: subsystem sizes must span a factor of at least 4");
  ScalingFit f;
  f.subsystems = subsystems;
  f.entropies.resize(subsystems.size());
  yanglee::detail::parallel_for(subsystems.size(), threads, [&](std::size_t i) {
    f.entropies[i] = ee_from_correlation(ssh_correlation_matrix(p, L, subsystems[i], filling, conv)).S;
  });
  std::vector<double> x, y;
  for (std::size_t i = 0; i < subsystems.size(); ++i) {
    x.push_back(std::log(static_cast<double>(subsystems[i])));
    y.push_back(f.entropies[i].real());
  }
  const auto lf = yanglee::detail::linear_fit(x, y);
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.r_squared = lf.r_squared;
  if (f.slope > kAreaLawSlope) {
    f.classification = ScalingLaw::SubareaLaw;
  } else if (std::abs(f.slope) <= kAreaLawSlope) {
    f.classification = ScalingLaw::AreaLaw;
  }
  return f;
}

/// Von Neumann entropy of the first `cut` sites of a pure state on L qubits
/// (site i is bit i of the basis index), from the singular values of the
/// 2^cut x 2^(L-cut) reshaping. An unnormalized state is normalized first and
/// *renormalized is set.
inline double state_ee(const Eigen::VectorXcd& state, int L, int cut, bool* renormalized = nullptr) {
  if (L < 2 || L > 30) throw DomainError("state_ee: L out of range");
  if (state.size() != (Eigen::Index{1} << L)) throw DomainError("state_ee: state dimension must be 2^L");
  if (cut < 1 || cut >= L) throw DomainError("state_ee: need 1 <= cut < L");
  const double norm = state.norm();
  if (!(norm > 0.0)) throw DomainError("state_ee: zero state");
  const bool fix = std::abs(norm - 1.0) > 1e-12;
  if (renormalized) *renormalized = fix;
  const Eigen::VectorXcd psi = fix ? Eigen::VectorXcd(state / norm) : state;
  const Eigen::Index rows = Eigen::Index{1} << cut;
  const Eigen::Index cols = Eigen::Index{1} << (L - cut);
  const Eigen::Map<const Eigen::MatrixXcd> m(psi.data(), rows, cols);
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double p2 = sv(i) * sv(i);
    if (p2 > 0.0) s -= p2 * std::log(p2);
  }
  return s;
}

}  // namespace yanglee::entanglement
