#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "yanglee/detail/fit.hpp"
#include "yanglee/detail/parallel.hpp"
#include "yanglee/entanglement.hpp"
#include "yanglee/errors.hpp"
#include "yanglee/numerics/eigen.hpp"
#include "yanglee/numerics/newton.hpp"
#include "yanglee/numerics/polynomial.hpp"

namespace yanglee::xxz {

/// H = -J sum_{i=1}^{L} (S^x_i S^x_{i+1} + S^y_i S^y_{i+1} + Delta S^z_i S^z_{i+1}),
/// periodic, site L+1 = site 1. For L = 2 both bonds are kept.
struct XXZParams {
  double J = 1.0;
  cplx delta_aniso{1.0, 0.0};
  int L = 2;

  /// delta = Delta - 1
  cplx delta() const { return delta_aniso - 1.0; }

  void validate() const {
    if (L < 2) throw DomainError("XXZParams: L must be >= 2");
    if (L > 30) throw DomainError("XXZParams: L must be <= 30");
    if (!(J > 0.0) || !std::isfinite(J)) throw DomainError("XXZParams: J must be positive and finite");
    if (!std::isfinite(delta_aniso.real()) || !std::isfinite(delta_aniso.imag())) {
      throw DomainError("XXZParams: Delta must be finite");
    }
  }
};

inline constexpr int kMaxSpectrumLength = 14;
inline constexpr int kMaxSearchLength = 10;

/// Fixed-magnetization block: basis states are L-bit patterns with M set bits
/// (set bit = down spin), in increasing numeric order.
struct MagnonSector {
  int L = 0;
  int M = 0;
  std::vector<std::uint32_t> basis;

  std::size_t dimension() const { return basis.size(); }

  /// Position of a pattern in the basis, or -1.
  Eigen::Index index_of(std::uint32_t s) const {
    const auto it = std::lower_bound(basis.begin(), basis.end(), s);
    return (it != basis.end() && *it == s) ? static_cast<Eigen::Index>(it - basis.begin()) : Eigen::Index{-1};
  }
};

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

inline MagnonSector magnon_sector(int L, int M) {
  if (L < 1 || L > 30) throw DomainError("magnon_sector: L must be in [1, 30]");
  if (M < 0 || M > L) throw DomainError("magnon_sector: M must be in [0, L]");
  MagnonSector s;
  s.L = L;
  s.M = M;
  s.basis.reserve(binomial(L, M));
  if (M == 0) {
    s.basis.push_back(0);
    return s;
  }
  const std::uint64_t limit = std::uint64_t{1} << L;
  std::uint64_t v = (std::uint64_t{1} << M) - 1;
  while (v < limit) {
    s.basis.push_back(static_cast<std::uint32_t>(v));
    // Next pattern with the same popcount.
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
  return s;
}

/// H restricted to a sector, split as -(J/2) flips - J Delta diag(ising):
/// flips counts the bonds connecting two basis states by an exchange,
/// ising is sum over bonds of s^z_i s^z_{i+1}.
struct SectorOperator {
  MagnonSector sector;
  Eigen::MatrixXd flips;
  Eigen::VectorXd ising;

  Eigen::MatrixXcd hamiltonian(double J, cplx Delta) const {
    Eigen::MatrixXcd h = (-0.5 * J) * flips.cast<cplx>();
    h.diagonal() -= (J * Delta) * ising.cast<cplx>();
    return h;
  }
};

inline SectorOperator sector_operator(const MagnonSector& s) {
  const auto n = static_cast<Eigen::Index>(s.dimension());
  SectorOperator op;
  op.sector = s;
  op.flips = Eigen::MatrixXd::Zero(n, n);
  op.ising = Eigen::VectorXd::Zero(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const std::uint32_t st = s.basis[static_cast<std::size_t>(a)];
    for (int i = 0; i < s.L; ++i) {
      const int j = (i + 1) % s.L;
      const bool bi = (st >> i) & 1u;
      const bool bj = (st >> j) & 1u;
      op.ising(a) += bi == bj ? 0.25 : -0.25;
      if (bi != bj) {
        const std::uint32_t t = st ^ (1u << i) ^ (1u << j);
        op.flips(s.index_of(t), a) += 1.0;
      }
    }
  }
  return op;
}

inline Eigen::MatrixXcd build_sector_hamiltonian(const XXZParams& p, const MagnonSector& sector) {
  p.validate();
  if (sector.L != p.L) throw DomainError("build_sector_hamiltonian: sector length differs from L");
  return sector_operator(sector).hamiltonian(p.J, p.delta_aniso);
}

struct SectorSpectrum {
  int M = 0;
  Eigen::VectorXcd values;
};

namespace detail {

inline Eigen::VectorXcd sector_eigenvalues(const SectorOperator& op, double J, cplx Delta) {
  try {
    return dense_eigenvalues(op.hamiltonian(J, Delta));
  } catch (const ConvergenceError& e) {
    throw ConvergenceError("sector M=" + std::to_string(op.sector.M) + ": " + e.what(), e.best_iterate(),
                           e.residual(), e.residual_history());
  }
}

inline double wrap_phase(double d) { return std::remainder(d, 2.0 * std::numbers::pi); }

}  // namespace detail

/// Spectra of all sectors M = 0..L, each sorted by real then imaginary part.
inline std::vector<SectorSpectrum> full_spectrum(const XXZParams& p, int threads = 1) {
  p.validate();
  if (p.L > kMaxSpectrumLength) throw DomainError("full_spectrum: L must be <= 14");
  std::vector<SectorSpectrum> out(static_cast<std::size_t>(p.L + 1));
  yanglee::detail::parallel_for(out.size(), threads, [&](std::size_t m) {
    const auto op = sector_operator(magnon_sector(p.L, static_cast<int>(m)));
    out[m].M = static_cast<int>(m);
    out[m].values = detail::sector_eigenvalues(op, p.J, p.delta_aniso);
  });
  return out;
}

/// All 2^L eigenvalues, sorted by real then imaginary part.
inline std::vector<cplx> flatten_spectrum(const std::vector<SectorSpectrum>& spec) {
  std::vector<cplx> all;
  for (const auto& s : spec) all.insert(all.end(), s.values.data(), s.values.data() + s.values.size());
  std::stable_sort(all.begin(), all.end(), yanglee::detail::eig_less);
  return all;
}

/// Complex number stored as log|z| and arg z.
struct LogComplex {
  double log_abs = -std::numeric_limits<double>::infinity();
  double phase = 0.0;

  cplx value() const { return std::polar(std::exp(log_abs), phase); }
};

/// Z = sum_n e^{-beta E_n}, with the smallest real part factored out before
/// exponentiating.
inline LogComplex partition_function(const std::vector<SectorSpectrum>& spec, double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("partition_function: beta must be finite and >= 0");
  double emin = std::numeric_limits<double>::infinity();
  for (const auto& s : spec) {
    for (Eigen::Index i = 0; i < s.values.size(); ++i) emin = std::min(emin, s.values(i).real());
  }
  cplx acc{};
  for (const auto& s : spec) {
    for (Eigen::Index i = 0; i < s.values.size(); ++i) acc += std::exp(-beta * (s.values(i) - emin));
  }
  LogComplex z;
  z.log_abs = -beta * emin + std::log(std::abs(acc));
  z.phase = std::arg(acc);
  return z;
}

inline LogComplex partition_function(const XXZParams& p, double beta, int threads = 1) {
  return partition_function(full_spectrum(p, threads), beta);
}

/// Degree of the Theorem-1 polynomial: floor(L^2 / 4).
inline int theorem1_degree(int L) {
  if (L < 2) throw DomainError("theorem1_degree: L must be >= 2");
  return L * L / 4;
}

/// sum_{M=0}^{L} z^{M(L-M)}.
inline ComplexPolynomial theorem1_polynomial(int L) {
  std::vector<cplx> c(static_cast<std::size_t>(theorem1_degree(L) + 1), cplx{});
  for (int M = 0; M <= L; ++M) c[static_cast<std::size_t>(M * (L - M))] += 1.0;
  return ComplexPolynomial(std::move(c));
}

enum class Provenance { Analytic, Numeric };

inline const char* to_string(Provenance p) { return p == Provenance::Analytic ? "Analytic" : "Numeric"; }

struct XXZZero {
  cplx delta_aniso;
  Provenance provenance = Provenance::Analytic;
  /// Numeric: |Z| / max_n |e^{-beta E_n}|. Analytic: 0.
  double residual = 0.0;
  /// Analytic entries: the polynomial root and the branch index.
  cplx z{};
  int n = 0;
  int root_index = -1;
  /// Numeric entries: winding number of the cell the zero was refined in.
  int multiplicity = 1;
};

struct ZeroLocus {
  std::vector<XXZZero> zeros;
  std::vector<std::string> warnings;
};

/// Corrected: z = e^{-beta J delta/(L-1)}, so
///   Delta = 1 - (L-1) ln|z|/(beta J) + i (L-1)(arg z + 2 pi n)/(beta J).
/// Literal: Delta = 1 + (L-1) log z/(beta J) + i (L-1) 2 pi n/(beta J), which
/// places the zeros on the mirror image Re Delta -> 2 - Re Delta.
enum class ZeroMap { Corrected, Literal };

inline const char* to_string(ZeroMap m) { return m == ZeroMap::Corrected ? "corrected" : "literal"; }

struct BranchWindow {
  int n_min = 0;
  int n_max = 0;
};

inline cplx theorem1_delta(cplx z, int L, double beta, double J, int n, ZeroMap map = ZeroMap::Corrected) {
  const double scale = (L - 1) / (beta * J);
  const double re = std::log(std::abs(z));
  const double im = std::arg(z) + 2.0 * std::numbers::pi * n;
  const double sign = map == ZeroMap::Corrected ? -1.0 : 1.0;
  return {1.0 + sign * scale * re, scale * im};
}

/// Zeros of Z predicted by the Theorem-1 polynomial, one per root and branch n,
/// ordered by n and then by root.
inline ZeroLocus theorem1_zeros(int L, double beta, double J = 1.0, BranchWindow window = {},
                                ZeroMap map = ZeroMap::Corrected) {
  if (!(beta > 0.0) || !(J > 0.0)) throw DomainError("theorem1_zeros: beta and J must be positive");
  if (window.n_min > window.n_max) throw DomainError("theorem1_zeros: empty branch window");
  auto roots = roots_of_polynomial(theorem1_polynomial(L));
  // Real coefficients: a root within rounding of the negative axis is put on
  // it, so arg z = pi.
  for (auto& z : roots) {
    if (std::abs(z.imag()) <= 1e-12 * std::abs(z)) z = cplx(z.real(), 0.0);
  }
  ZeroLocus out;
  for (int n = window.n_min; n <= window.n_max; ++n) {
    for (std::size_t j = 0; j < roots.size(); ++j) {
      XXZZero e;
      e.delta_aniso = theorem1_delta(roots[j], L, beta, J, n, map);
      e.provenance = Provenance::Analytic;
      e.z = roots[j];
      e.n = n;
      e.root_index = static_cast<int>(j);
      out.zeros.push_back(e);
    }
  }
  return out;
}

/// Z(Delta) for one (L, J, beta), with the sector operators built once.
/// Spin-flip symmetry M <-> L-M is used to diagonalize only M <= L/2.
class PartitionEvaluator {
 public:
  struct Sample {
    /// Z e^{beta E_ref(Delta)}; holomorphic in Delta, may overflow far from Delta = 1.
    cplx shifted;
    /// arg of `shifted`, computed without forming it.
    double phase = 0.0;
    /// |Z| / max_n |e^{-beta E_n}|
    double residual = 0.0;
  };

  PartitionEvaluator(int L, double J, double beta) : L_(L), J_(J), beta_(beta) {
    if (L < 2 || L > kMaxSearchLength) throw DomainError("PartitionEvaluator: L must be in [2, 10]");
    if (!(J > 0.0) || !(beta > 0.0)) throw DomainError("PartitionEvaluator: J and beta must be positive");
    for (int M = 0; 2 * M <= L; ++M) {
      ops_.push_back(sector_operator(magnon_sector(L, M)));
      weights_.push_back(2 * M == L ? 1.0 : 2.0);
    }
  }

  int L() const { return L_; }
  double J() const { return J_; }
  double beta() const { return beta_; }

  /// E_ref = -J L Delta/4 + J delta N/(2(L-1)), N = floor(L^2/4): the ground
  /// energy shifted to the middle of the first-order Bethe ladder.
  cplx reference_energy(cplx Delta) const {
    const double N = theorem1_degree(L_);
    return -J_ * L_ * Delta / 4.0 + J_ * (Delta - 1.0) * N / (2.0 * (L_ - 1));
  }

  Sample operator()(cplx Delta) const {
    std::vector<Eigen::VectorXcd> ev;
    ev.reserve(ops_.size());
    double emin = std::numeric_limits<double>::infinity();
    for (const auto& op : ops_) {
      ev.push_back(detail::sector_eigenvalues(op, J_, Delta));
      emin = std::min(emin, ev.back().real().minCoeff());
    }
    cplx g{};
    for (std::size_t s = 0; s < ev.size(); ++s) {
      for (Eigen::Index i = 0; i < ev[s].size(); ++i) g += weights_[s] * std::exp(-beta_ * (ev[s](i) - emin));
    }
    const cplx eref = reference_energy(Delta);
    Sample out;
    out.residual = std::abs(g);
    out.phase = std::arg(g) + beta_ * eref.imag();
    out.shifted = g * std::exp(beta_ * (eref - emin));
    return out;
  }

 private:
  int L_;
  double J_;
  double beta_;
  std::vector<SectorOperator> ops_;
  std::vector<double> weights_;
};

struct ComplexWindow {
  double re_min = 0.9;
  double re_max = 1.1;
  double im_min = 0.0;
  double im_max = 0.2;
};

struct ZeroSearchOptions {
  int grid_re = 40;
  int grid_im = 40;
  /// Quadtree levels below a grid cell.
  int max_depth = 8;
  /// Bisections allowed per edge while tracking the phase.
  int edge_depth = 10;
  double secant_tol = 1e-14;
  int max_secant_iterations = 80;
  double residual_tol = 1e-8;
  double merge_distance = 1e-9;
  int threads = 1;
};

namespace detail {

template <class F>
std::optional<cplx> complex_secant(const F& f, cplx x0, cplx x1, double tol, int max_iterations) {
  cplx f0 = f(x0), f1 = f(x1);
  for (int it = 0; it < max_iterations; ++it) {
    if (f1 == cplx{}) return x1;
    if (f1 == f0) return std::nullopt;
    const cplx x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2.real()) || !std::isfinite(x2.imag())) return std::nullopt;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x1);
    if (std::abs(x1 - x0) <= tol * (1.0 + std::abs(x1))) return x1;
  }
  return std::nullopt;
}

class WindingSearch {
 public:
  WindingSearch(const PartitionEvaluator& ev, const ZeroSearchOptions& opt) : ev_(ev), opt_(opt) {}

  double phase(cplx d) const { return ev_(d).phase; }

  // Phase increment from a to b, bisecting while a step exceeds pi/2.
  double edge(cplx a, cplx b, double pa, double pb, int depth, bool& unresolved) const {
    const double d = wrap_phase(pb - pa);
    if (std::abs(d) <= 0.5 * std::numbers::pi) return d;
    if (depth == 0) {
      unresolved = true;
      return d;
    }
    const cplx m = 0.5 * (a + b);
    const double pm = phase(m);
    return edge(a, m, pa, pm, depth - 1, unresolved) + edge(m, b, pm, pb, depth - 1, unresolved);
  }

  int winding(cplx lo, cplx hi, bool& unresolved) const {
    const cplx c[4] = {lo, {hi.real(), lo.imag()}, hi, {lo.real(), hi.imag()}};
    double p[4];
    for (int i = 0; i < 4; ++i) p[i] = phase(c[i]);
    double total = 0.0;
    for (int i = 0; i < 4; ++i) total += edge(c[i], c[(i + 1) % 4], p[i], p[(i + 1) % 4], opt_.edge_depth, unresolved);
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  }

  void refine(cplx lo, cplx hi, int w, int depth, ZeroLocus& out) const {
    if (w < 0) {
      out.warnings.push_back("negative winding in cell " + describe(lo, hi) + "; phase sampling unresolved");
      return;
    }
    const cplx size = hi - lo;
    if (w == 1 || depth >= opt_.max_depth) {
      const cplx c = 0.5 * (lo + hi);
      const auto f = [&](cplx d) { return ev_(d).shifted; };
      const auto root = complex_secant(f, c, c + cplx(0.05, 0.03) * size, opt_.secant_tol, opt_.max_secant_iterations);
      const double margin = 0.25;
      if (root && root->real() >= lo.real() - margin * size.real() && root->real() <= hi.real() + margin * size.real() &&
          root->imag() >= lo.imag() - margin * size.imag() && root->imag() <= hi.imag() + margin * size.imag()) {
        const double res = ev_(*root).residual;
        if (res <= opt_.residual_tol) {
          XXZZero z;
          z.delta_aniso = *root;
          z.provenance = Provenance::Numeric;
          z.residual = res;
          z.multiplicity = w;
          out.zeros.push_back(z);
          return;
        }
        if (depth >= opt_.max_depth) {
          out.warnings.push_back("candidate in cell " + describe(lo, hi) + " dropped: residual " + fmt(res) +
                                 " above tolerance");
          return;
        }
      } else if (depth >= opt_.max_depth) {
        out.warnings.push_back("candidate in cell " + describe(lo, hi) + " dropped: secant did not converge in cell");
        return;
      }
    }
    const cplx mid = 0.5 * (lo + hi);
    const cplx sub[4][2] = {{lo, mid},
                            {{mid.real(), lo.imag()}, {hi.real(), mid.imag()}},
                            {{lo.real(), mid.imag()}, {mid.real(), hi.imag()}},
                            {mid, hi}};
    int total = 0;
    int wc[4];
    bool unresolved = false;
    for (int i = 0; i < 4; ++i) {
      wc[i] = winding(sub[i][0], sub[i][1], unresolved);
      total += wc[i];
    }
    if (total != w || unresolved) {
      out.warnings.push_back("winding of cell " + describe(lo, hi) + " not conserved under subdivision (" +
                             std::to_string(w) + " -> " + std::to_string(total) + ")");
    }
    for (int i = 0; i < 4; ++i) {
      if (wc[i] != 0) refine(sub[i][0], sub[i][1], wc[i], depth + 1, out);
    }
  }

  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
  }

  static std::string describe(cplx lo, cplx hi) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "[%.6g,%.6g]x[%.6g,%.6g]", lo.real(), hi.real(), lo.imag(), hi.imag());
    return buf;
  }

 private:
  const PartitionEvaluator& ev_;
  const ZeroSearchOptions& opt_;
};

}  // namespace detail

/// Zeros of Z(Delta) inside a window, by the argument principle on a grid of
/// plaquettes. Cells with nonzero winding are subdivided until they hold a
/// single zero, which is then polished by complex secant iteration on
/// Z e^{beta E_ref}. Candidates that fail to converge, or whose residual
/// exceeds residual_tol, are dropped with a warning. Sorted by (Re, Im).
inline ZeroLocus locate_zeros_numeric(const ComplexWindow& w, int L, double J, double beta,
                                      const ZeroSearchOptions& opt = {}) {
  if (!(w.re_max > w.re_min) || !(w.im_max > w.im_min)) throw DomainError("locate_zeros_numeric: empty window");
  if (opt.grid_re < 1 || opt.grid_im < 1) throw DomainError("locate_zeros_numeric: grid must be at least 1x1");
  const PartitionEvaluator ev(L, J, beta);
  const detail::WindingSearch search(ev, opt);
  const int nr = opt.grid_re, ni = opt.grid_im;
  const auto node = [&](int i, int j) {
    return cplx(w.re_min + (w.re_max - w.re_min) * i / nr, w.im_min + (w.im_max - w.im_min) * j / ni);
  };
  const auto nodes = static_cast<std::size_t>((nr + 1) * (ni + 1));
  std::vector<double> ph(nodes);
  yanglee::detail::parallel_for(nodes, opt.threads, [&](std::size_t k) {
    const int i = static_cast<int>(k) % (nr + 1), j = static_cast<int>(k) / (nr + 1);
    ph[k] = search.phase(node(i, j));
  });
  const auto at = [&](int i, int j) { return ph[static_cast<std::size_t>(j * (nr + 1) + i)]; };

  // Horizontal edge (i, j) -> (i+1, j) and vertical edge (i, j) -> (i, j+1).
  std::vector<double> hor(static_cast<std::size_t>(nr * (ni + 1)));
  std::vector<double> ver(static_cast<std::size_t>((nr + 1) * ni));
  std::vector<char> hor_bad(hor.size(), 0), ver_bad(ver.size(), 0);
  yanglee::detail::parallel_for(hor.size(), opt.threads, [&](std::size_t k) {
    const int i = static_cast<int>(k) % nr, j = static_cast<int>(k) / nr;
    bool bad = false;
    hor[k] = search.edge(node(i, j), node(i + 1, j), at(i, j), at(i + 1, j), opt.edge_depth, bad);
    hor_bad[k] = bad;
  });
  yanglee::detail::parallel_for(ver.size(), opt.threads, [&](std::size_t k) {
    const int i = static_cast<int>(k) % (nr + 1), j = static_cast<int>(k) / (nr + 1);
    bool bad = false;
    ver[k] = search.edge(node(i, j), node(i, j + 1), at(i, j), at(i, j + 1), opt.edge_depth, bad);
    ver_bad[k] = bad;
  });

  struct Cell {
    int i, j, w;
  };
  std::vector<Cell> cells;
  ZeroLocus out;
  for (int j = 0; j < ni; ++j) {
    for (int i = 0; i < nr; ++i) {
      const auto h0 = static_cast<std::size_t>(j * nr + i), h1 = static_cast<std::size_t>((j + 1) * nr + i);
      const auto v0 = static_cast<std::size_t>(j * (nr + 1) + i), v1 = v0 + 1;
      const double total = hor[h0] + ver[v1] - hor[h1] - ver[v0];
      const int wn = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
      if (hor_bad[h0] || hor_bad[h1] || ver_bad[v0] || ver_bad[v1]) {
        out.warnings.push_back("phase along the boundary of cell " +
                               detail::WindingSearch::describe(node(i, j), node(i + 1, j + 1)) +
                               " changes too fast to resolve");
      }
      if (wn != 0) cells.push_back({i, j, wn});
    }
  }

  std::vector<ZeroLocus> found(cells.size());
  yanglee::detail::parallel_for(cells.size(), opt.threads, [&](std::size_t c) {
    search.refine(node(cells[c].i, cells[c].j), node(cells[c].i + 1, cells[c].j + 1), cells[c].w, 0, found[c]);
  });
  for (auto& f : found) {
    out.warnings.insert(out.warnings.end(), f.warnings.begin(), f.warnings.end());
    for (const auto& z : f.zeros) {
      const bool inside = z.delta_aniso.real() >= w.re_min && z.delta_aniso.real() <= w.re_max &&
                          z.delta_aniso.imag() >= w.im_min && z.delta_aniso.imag() <= w.im_max;
      if (!inside) continue;
      const bool dup = std::any_of(out.zeros.begin(), out.zeros.end(), [&](const XXZZero& o) {
        return std::abs(o.delta_aniso - z.delta_aniso) <= opt.merge_distance * (1.0 + std::abs(z.delta_aniso));
      });
      if (!dup) out.zeros.push_back(z);
    }
  }
  std::stable_sort(out.zeros.begin(), out.zeros.end(), [](const XXZZero& a, const XXZZero& b) {
    return yanglee::detail::eig_less(a.delta_aniso, b.delta_aniso);
  });
  return out;
}

/// One analytic zero and the nearest numeric zero.
struct PartnerRow {
  cplx analytic;
  cplx numeric;
  double distance = std::numeric_limits<double>::infinity();
  double residual = 0.0;
  cplx z;
  bool found = false;
};

struct Theorem1Check {
  int L = 0;
  double beta = 0.0;
  double J = 1.0;
  ComplexWindow window;
  std::vector<PartnerRow> rows;
  double max_distance = 0.0;
  ZeroLocus numeric;
};

/// Pairs each n = 0 analytic zero with the nearest numeric zero of Z. The
/// search covers the box |Re Delta - 1|, |Im Delta| <= 1.3 max_j |Delta_j - 1|;
/// only its upper half is scanned, since Z(conj Delta) = conj Z(Delta).
inline Theorem1Check theorem1_consistency(int L, double beta, double J = 1.0, const ZeroSearchOptions& opt = {},
                                          ZeroMap map = ZeroMap::Corrected) {
  const auto analytic = theorem1_zeros(L, beta, J, {0, 0}, map);
  double span = 1e-3;
  for (const auto& a : analytic.zeros) span = std::max(span, 1.3 * std::abs(a.delta_aniso - 1.0));
  Theorem1Check chk;
  chk.L = L;
  chk.beta = beta;
  chk.J = J;
  // Slightly asymmetric so that Re Delta = 1 is not a grid line.
  chk.window = {1.0 - 1.0123 * span, 1.0 + span, 0.0, span};
  auto upper = locate_zeros_numeric(chk.window, L, J, beta, opt);
  chk.numeric.warnings = upper.warnings;
  for (const auto& z : upper.zeros) {
    chk.numeric.zeros.push_back(z);
    if (z.delta_aniso.imag() > 0.0) {
      auto c = z;
      c.delta_aniso = std::conj(z.delta_aniso);
      chk.numeric.zeros.push_back(c);
    }
  }
  chk.window.im_min = -span;
  for (const auto& a : analytic.zeros) {
    PartnerRow r;
    r.analytic = a.delta_aniso;
    r.z = a.z;
    for (const auto& nz : chk.numeric.zeros) {
      const double d = std::abs(nz.delta_aniso - a.delta_aniso);
      if (d < r.distance) {
        r.distance = d;
        r.numeric = nz.delta_aniso;
        r.residual = nz.residual;
        r.found = true;
      }
    }
    chk.max_distance = std::max(chk.max_distance, r.distance);
    chk.rows.push_back(r);
  }
  return chk;
}

/// g = beta J N / (2 pi (L-1)).
inline double zero_density(int L, double beta, double J = 1.0) {
  if (!(beta > 0.0) || !(J > 0.0)) throw DomainError("zero_density: beta and J must be positive");
  return beta * J * theorem1_degree(L) / (2.0 * std::numbers::pi * (L - 1));
}

struct MagnonEnergy {
  cplx E_M;
  /// -J Re delta/(L-1)
  double gap_gapless = 0.0;
  /// J Re delta
  double gap_gapped = 0.0;
};

/// E_M = -J L (1+delta)/4 + J delta M(L-M)/(L-1).
inline MagnonEnergy magnon_energy_and_gap(int L, int M, double J, cplx delta) {
  if (L < 2) throw DomainError("magnon_energy_and_gap: L must be >= 2");
  if (M < 0 || M > L) throw DomainError("magnon_energy_and_gap: M must be in [0, L]");
  MagnonEnergy e;
  e.E_M = -J * L * (1.0 + delta) / 4.0 + J * delta * static_cast<double>(M * (L - M)) / (L - 1.0);
  e.gap_gapless = -J * delta.real() / (L - 1.0);
  e.gap_gapped = J * delta.real();
  return e;
}

/// Lowest real part of the sector-M spectrum at real Delta.
inline double sector_ground_energy(int L, int M, double J, double Delta) {
  const auto op = sector_operator(magnon_sector(L, M));
  return detail::sector_eigenvalues(op, J, cplx(Delta, 0.0)).real().minCoeff();
}

/// Central-difference d(E_min,M - E_0)/d delta at delta = 0 from exact
/// diagonalization, E_0 = -J L Delta/4.
inline double sector_energy_slope(int L, int M, double J = 1.0, double h = 1e-4) {
  if (L < 2 || L > kMaxSpectrumLength) throw DomainError("sector_energy_slope: L must be in [2, 14]");
  const double up = sector_ground_energy(L, M, J, 1.0 + h);
  const double dn = sector_ground_energy(L, M, J, 1.0 - h);
  return (up - dn) / (2.0 * h) + J * L / 4.0;
}

struct LevelGap {
  double ground = 0.0;
  double excited = 0.0;
  double gap = 0.0;
  int ground_sector = 0;
  int excited_sector = 0;
};

/// Distance between the two lowest distinct real parts of the spectrum;
/// levels closer than degeneracy_tol count as one.
inline LevelGap lowest_gap(const XXZParams& p, double degeneracy_tol = 1e-9, int threads = 1) {
  const auto spec = full_spectrum(p, threads);
  std::vector<std::pair<double, int>> lv;
  for (const auto& s : spec) {
    for (Eigen::Index i = 0; i < s.values.size(); ++i) lv.emplace_back(s.values(i).real(), s.M);
  }
  std::stable_sort(lv.begin(), lv.end());
  LevelGap g;
  g.ground = lv.front().first;
  g.ground_sector = lv.front().second;
  for (const auto& [e, m] : lv) {
    if (e > g.ground + degeneracy_tol) {
      g.excited = e;
      g.excited_sector = m;
      g.gap = e - g.ground;
      return g;
    }
  }
  throw DomainError("lowest_gap: spectrum has a single distinct real part");
}

struct SBAESolution {
  int L = 0;
  int M = 0;
  std::vector<cplx> zeta;
  double residual = 0.0;
  int attempts = 0;
};

struct SBAEOptions {
  double tol = 1e-11;
  int retries = 8;
  double perturbation = 1e-3;
  std::uint64_t seed = 1;
};

/// F_j = L zeta_j - 2 sum_{l != j} (1 + zeta_l zeta_j)/(zeta_l - zeta_j).
inline std::vector<cplx> sbae_residual(int L, const std::vector<cplx>& zeta) {
  std::vector<cplx> f(zeta.size());
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    cplx s{};
    for (std::size_t l = 0; l < zeta.size(); ++l) {
      if (l != j) s += (1.0 + zeta[l] * zeta[j]) / (zeta[l] - zeta[j]);
    }
    f[j] = static_cast<double>(L) * zeta[j] - 2.0 * s;
  }
  return f;
}

namespace detail {

inline bool sbae_valid(int L, int M, const std::vector<cplx>& z) {
  cplx s1{}, s2{};
  for (const auto& v : z) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    s1 += v;
    s2 += v * v;
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = i + 1; j < z.size(); ++j) {
      if (std::abs(z[i] - z[j]) <= 1e-8) return false;
    }
  }
  return std::abs(s1) <= 1e-10 && std::abs(s2 + static_cast<double>(M * (M - 1)) / (L - 1)) <= 1e-9;
}

}  // namespace detail

/// Newton solution of the simplified Bethe equations in zeta_j = cot y_j.
/// The first start is zeta_j = i c (2j - M - 1)/2 with c^2 = 12/((L-1)(M+1)),
/// symmetric under zeta -> -zeta and already satisfying the quadratic sum rule;
/// retries add seeded complex perturbations of size `perturbation`.
inline SBAESolution sbae_solve(int L, int M, const SBAEOptions& opt = {}) {
  if (L < 2) throw DomainError("sbae_solve: L must be >= 2");
  if (M < 1 || M > L - 1) throw DomainError("sbae_solve: M must be in [1, L-1]");
  const double c = std::sqrt(12.0 / ((L - 1.0) * (M + 1.0)));
  std::vector<cplx> start(static_cast<std::size_t>(M));
  for (int j = 1; j <= M; ++j) start[static_cast<std::size_t>(j - 1)] = cplx(0.0, 0.5 * c * (2 * j - M - 1));
  const ComplexSystem f = [L](const std::vector<cplx>& z) { return sbae_residual(L, z); };
  NewtonOptions nopt;
  nopt.tol = opt.tol;
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<cplx> best = start;
  double best_res = std::numeric_limits<double>::infinity();
  std::vector<double> history;
  for (int attempt = 0; attempt <= opt.retries; ++attempt) {
    auto x0 = start;
    if (attempt > 0) {
      for (auto& v : x0) v += opt.perturbation * cplx(normal(rng), normal(rng));
    }
    try {
      const auto r = newton_system(f, x0, nopt);
      if (detail::sbae_valid(L, M, r.x)) {
        SBAESolution s;
        s.L = L;
        s.M = M;
        s.zeta = r.x;
        s.residual = r.residual;
        s.attempts = attempt + 1;
        return s;
      }
      if (r.residual < best_res) {
        best = r.x;
        best_res = r.residual;
      }
      history = r.history;
    } catch (const ConvergenceError& e) {
      if (e.residual() < best_res) {
        best = e.best_iterate();
        best_res = e.residual();
      }
      history = e.residual_history();
    }
  }
  throw ConvergenceError("sbae_solve: no valid solution for L=" + std::to_string(L) + ", M=" + std::to_string(M),
                         best, best_res, history);
}

/// E_0 + sum_j 2 J delta (1 + zeta_j^2)/(2 + delta zeta_j^2), E_0 = -J L (1+delta)/4.
inline cplx sbae_energy(const SBAESolution& s, double J, cplx delta) {
  cplx e = -J * s.L * (1.0 + delta) / 4.0;
  for (const auto& z : s.zeta) e += 2.0 * J * delta * (1.0 + z * z) / (2.0 + delta * z * z);
  return e;
}

struct SusceptibilityPoint {
  double delta = 0.0;
  double h = 0.0;
  /// Continuous minimizer M* = L/2 + h (L-1)/(2 J delta).
  double m_star = 0.0;
  /// 2 s_z / h with s_z = (L/2 - M*)/L.
  double chi = 0.0;
  /// Same with M restricted to integers.
  double chi_integer = 0.0;
};

struct SusceptibilityScaling {
  std::vector<SusceptibilityPoint> points;
  /// chi at the smallest h, one per delta in input order.
  std::vector<double> chi_h0;
  /// -slope of ln chi_h0 against ln |delta|.
  double sigma_fit = 0.0;
};

/// Zero-field susceptibility on the gapless side from minimizing
/// E_M - h (L/2 - M), with E_M the first-order magnon energy. The Bethe-ansatz
/// form chi = 4 gamma / (J pi (pi - gamma) sin gamma), cos gamma = -Delta,
/// enters only through its delta^{-1} scaling.
inline SusceptibilityScaling susceptibility_scaling(int L, double J, const std::vector<double>& deltas,
                                                    const std::vector<double>& hs) {
  if (L < 2) throw DomainError("susceptibility_scaling: L must be >= 2");
  if (!(J > 0.0)) throw DomainError("susceptibility_scaling: J must be positive");
  if (deltas.empty() || hs.empty()) throw DomainError("susceptibility_scaling: empty delta or h grid");
  SusceptibilityScaling out;
  const double hmin = *std::min_element(hs.begin(), hs.end());
  for (double d : deltas) {
    if (!(d < 0.0)) throw DomainError("susceptibility_scaling: delta must be negative (gapless side)");
    double chi0 = 0.0;
    for (double h : hs) {
      if (!(h > 0.0)) throw DomainError("susceptibility_scaling: h must be positive");
      SusceptibilityPoint pt;
      pt.delta = d;
      pt.h = h;
      pt.m_star = L / 2.0 + h * (L - 1.0) / (2.0 * J * d);
      if (!(pt.m_star > 0.0 && pt.m_star < L)) throw DomainError("susceptibility_scaling: h too large, M* leaves (0, L)");
      pt.chi = 2.0 * (L / 2.0 - pt.m_star) / L / h;
      int best = 0;
      double emin = std::numeric_limits<double>::infinity();
      for (int M = 0; M <= L; ++M) {
        const double e = J * d * M * (L - M) / (L - 1.0) - h * (L / 2.0 - M);
        if (e < emin - 1e-15) {
          emin = e;
          best = M;
        }
      }
      pt.chi_integer = 2.0 * (L / 2.0 - best) / L / h;
      if (h == hmin) chi0 = pt.chi;
      out.points.push_back(pt);
    }
    out.chi_h0.push_back(chi0);
  }
  if (deltas.size() >= 2) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      x.push_back(std::log(-deltas[i]));
      y.push_back(std::log(out.chi_h0[i]));
    }
    out.sigma_fit = -yanglee::detail::linear_fit(x, y).slope;
  }
  return out;
}

namespace detail {

// Cyclic shift of the site labels by one: site i goes to i + 1 mod L.
inline std::uint32_t translate(std::uint32_t s, int L) {
  const std::uint32_t mask = (std::uint32_t{1} << L) - 1u;
  return ((s << 1) | (s >> (L - 1))) & mask;
}

// Smallest translate of s, the shift l with s = T^l rep, and the orbit length.
struct Orbit {
  std::uint32_t rep = 0;
  int shift = 0;
  int period = 0;
};

inline Orbit orbit(std::uint32_t s, int L) {
  Orbit o{s, 0, L};
  std::uint32_t t = s;
  for (int j = 1; j <= L; ++j) {
    t = translate(t, L);
    if (t == s) {
      o.period = j;
      break;
    }
    if (t < o.rep) {
      o.rep = t;
      o.shift = L - j;
    }
  }
  return o;
}

}  // namespace detail

/// Magnon sector restricted to lattice momentum 2 pi q / L, in the basis
/// |r, q> = R_r^{-1/2} sum_{j < R_r} e^{-i k j} T^j |r> over orbit
/// representatives r of length R_r with q R_r = 0 mod L.
struct MomentumBlock {
  int M = 0;
  int q = 0;
  std::vector<std::uint32_t> reps;
  std::vector<int> periods;
  Eigen::MatrixXcd h;
};

inline MomentumBlock momentum_block(const XXZParams& p, int M, int q) {
  p.validate();
  if (q < 0 || q >= p.L) throw DomainError("momentum_block: need 0 <= q < L");
  const auto sector = magnon_sector(p.L, M);
  MomentumBlock b;
  b.M = M;
  b.q = q;
  for (std::uint32_t s : sector.basis) {
    const auto o = detail::orbit(s, p.L);
    if (o.rep == s && (q * o.period) % p.L == 0) {
      b.reps.push_back(s);
      b.periods.push_back(o.period);
    }
  }
  const auto n = static_cast<Eigen::Index>(b.reps.size());
  const double k = 2.0 * std::numbers::pi * q / p.L;
  b.h = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const std::uint32_t st = b.reps[static_cast<std::size_t>(a)];
    double ising = 0.0;
    for (int i = 0; i < p.L; ++i) {
      const int j = (i + 1) % p.L;
      const bool bi = (st >> i) & 1u;
      const bool bj = (st >> j) & 1u;
      ising += bi == bj ? 0.25 : -0.25;
      if (bi == bj) continue;
      const auto o = detail::orbit(st ^ (1u << i) ^ (1u << j), p.L);
      const auto it = std::lower_bound(b.reps.begin(), b.reps.end(), o.rep);
      if (it == b.reps.end() || *it != o.rep) continue;
      const auto r = it - b.reps.begin();
      const double ratio = static_cast<double>(b.periods[static_cast<std::size_t>(a)]) /
                           static_cast<double>(b.periods[static_cast<std::size_t>(r)]);
      b.h(r, a) += -0.5 * p.J * std::exp(cplx(0.0, k * o.shift)) * std::sqrt(ratio);
    }
    b.h(a, a) += -p.J * p.delta_aniso * ising;
  }
  return b;
}

struct GroundState {
  int M = 0;
  cplx energy;
  /// Right eigenvector in the full 2^L basis (site i is bit i), unit norm.
  Eigen::VectorXcd state;
};

/// Right eigenvector with the lowest real energy. Sectors M and L-M are
/// degenerate; the smaller M is returned, and among momentum blocks whose
/// lowest real parts agree within 1e-10 (1 + |E|) the smallest M, then the
/// smallest q, wins.
inline GroundState right_ground_state(const XXZParams& p, int threads = 1) {
  p.validate();
  if (p.L > kMaxSpectrumLength) throw DomainError("right_ground_state: L must be <= 14");
  std::vector<std::pair<int, int>> labels;
  for (int m = 0; 2 * m <= p.L; ++m) {
    for (int q = 0; q < p.L; ++q) labels.emplace_back(m, q);
  }
  std::vector<MomentumBlock> blocks(labels.size());
  std::vector<double> low(labels.size(), std::numeric_limits<double>::infinity());
  yanglee::detail::parallel_for(labels.size(), threads, [&](std::size_t i) {
    blocks[i] = momentum_block(p, labels[i].first, labels[i].second);
    if (blocks[i].h.rows() > 0) low[i] = dense_eigenvalues(blocks[i].h).real().minCoeff();
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    if (low[i] < low[best] - 1e-10 * (1.0 + std::abs(low[best]))) best = i;
  }
  const MomentumBlock& blk = blocks[best];
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(blk.h, true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("right_ground_state: eigensolver failed in sector M=" + std::to_string(blk.M), {}, INFINITY);
  }
  const Eigen::Index k = yanglee::detail::eig_order(solver.eigenvalues()).front();
  const Eigen::VectorXcd c = solver.eigenvectors().col(k);
  const double kq = 2.0 * std::numbers::pi * blk.q / p.L;
  GroundState g;
  g.M = blk.M;
  g.energy = solver.eigenvalues()(k);
  g.state = Eigen::VectorXcd::Zero(Eigen::Index{1} << p.L);
  for (std::size_t a = 0; a < blk.reps.size(); ++a) {
    std::uint32_t t = blk.reps[a];
    const double norm = std::sqrt(static_cast<double>(blk.periods[a]));
    for (int j = 0; j < blk.periods[a]; ++j) {
      g.state(t) = c(static_cast<Eigen::Index>(a)) * std::exp(cplx(0.0, -kq * j)) / norm;
      t = detail::translate(t, p.L);
    }
  }
  g.state.normalize();
  const auto op = sector_operator(magnon_sector(p.L, g.M));
  Eigen::VectorXcd v(static_cast<Eigen::Index>(op.sector.dimension()));
  for (std::size_t a = 0; a < op.sector.basis.size(); ++a) v(static_cast<Eigen::Index>(a)) = g.state(op.sector.basis[a]);
  const Eigen::MatrixXcd h = op.hamiltonian(p.J, p.delta_aniso);
  const double residual = (h * v - g.energy * v).norm() / std::max(h.norm(), 1e-300);
  if (!(residual <= kEigenResidualTolerance)) {
    throw ConvergenceError("right_ground_state: eigenvector residual above tolerance", {g.energy}, residual);
  }
  return g;
}

struct EntanglementProfile {
  std::vector<int> cuts;
  std::vector<double> entropies;
  /// Re S = a + b ln sin(pi L_A / L)
  double a = 0.0;
  double b = 0.0;
  double r_squared = 0.0;
  int ground_sector = 0;
  cplx ground_energy;
};

/// Entanglement entropy of the right ground state for blocks of the first L_A
/// sites, fitted against ln sin(pi L_A/L). Default cuts are 1..L-1.
inline EntanglementProfile xxz_entanglement(const XXZParams& p, std::vector<int> cuts = {}, int threads = 1) {
  p.validate();
  if (p.L < 4) throw DomainError("xxz_entanglement: L must be >= 4");
  if (cuts.empty()) {
    for (int c = 1; c < p.L; ++c) cuts.push_back(c);
  }
  const auto g = right_ground_state(p, threads);
  EntanglementProfile out;
  out.cuts = cuts;
  out.ground_sector = g.M;
  out.ground_energy = g.energy;
  std::vector<double> x;
  for (int c : cuts) {
    out.entropies.push_back(entanglement::state_ee(g.state, p.L, c));
    x.push_back(std::log(std::sin(std::numbers::pi * c / p.L)));
  }
  const auto f = yanglee::detail::linear_fit(x, out.entropies);
  out.a = f.intercept;
  out.b = f.slope;
  out.r_squared = f.r_squared;
  return out;
}

}  // namespace yanglee::xxz
