// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failing criteria (capped at 1).

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "yanglee/cli/run.hpp"
#include "yanglee/entanglement.hpp"
#include "yanglee/ssh.hpp"
#include "yanglee/xxz.hpp"

namespace {

using yanglee::cplx;
namespace ssh = yanglee::ssh;
namespace xxz = yanglee::xxz;
namespace ent = yanglee::entanglement;

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Verdict()> body;
};

// ------------------------------------------------------------------ 1

Verdict region_scan() {
  Verdict v;
  const double u = 1.0;
  ssh::RegionScanOptions o;
  o.u = u;
  o.w_minus_v.resize(200);
  for (int i = 0; i < 200; ++i) o.w_minus_v[static_cast<std::size_t>(i)] = -1.99 + 3.98 * i / 199.0;
  const double cell = o.w_minus_v[1] - o.w_minus_v[0];
  const std::vector<double> betas{10.0, 50.0, 200.0};
  // 50 log-spaced temperatures from 1/200 to 1/10 with the three target rows exact.
  for (int i = 0; i < 50; ++i) o.temperatures.push_back(std::exp(std::log(0.005) + std::log(20.0) * i / 49.0));
  for (double b : betas) {
    auto it = std::min_element(o.temperatures.begin(), o.temperatures.end(),
                               [&](double a, double c) { return std::abs(a - 1.0 / b) < std::abs(c - 1.0 / b); });
    *it = 1.0 / b;
  }
  const auto scan = ssh::zeros_region_scan(o);
  std::vector<double> offsets;
  for (double b : betas) {
    const auto& row = *std::find_if(scan.boundary.begin(), scan.boundary.end(),
                                    [&](const auto& r) { return r.temperature == 1.0 / b; });
    const double off = std::max(std::abs(row.left + u), std::abs(row.right - u));
    offsets.push_back(std::isnan(off) ? std::numeric_limits<double>::infinity() : off);
    v.detail += fmt("%sbeta=%g edges [%.4f, %.4f] offset %.4f", v.detail.empty() ? "" : "; ", b, row.left, row.right, off);
  }
  v.check(offsets[0] >= offsets[1] && offsets[1] >= offsets[2], "offset non-increasing in beta");
  v.check(offsets[2] <= 2.0 * cell, fmt("offset at beta=200 %.4f <= 2 cells (%.4f)", offsets[2], 2.0 * cell));
  return v;
}

// ------------------------------------------------------------------ 2

Verdict root_count() {
  Verdict v;
  for (double beta : {50.0, 100.0, 400.0}) {
    const int chi = ssh::yang_lee_root_count({1, 1, 1}, beta).chi;
    const double err = std::abs(chi / beta - 1.0 / (2.0 * std::numbers::pi));
    v.check(err <= 1.0 / beta, fmt("beta=%g chi=%d |chi/beta-1/2pi|=%.2e", beta, chi, err));
  }
  return v;
}

// ------------------------------------------------------------------ 3

Verdict asymptotics() {
  Verdict v;
  double worst_lo = 1e300, worst_hi = -1e300;
  for (double delta : {0.02, 0.05, 0.1}) {
    const ssh::Params p{1.0, 2.0 + delta, 1.0};
    const double xi = ssh::correlation_length(p);
    for (int x = static_cast<int>(std::ceil(3 * xi)); x <= static_cast<int>(std::floor(6 * xi));
         x += std::max(1, static_cast<int>(xi / 4))) {
      const double r = std::abs(ssh::corr_real(p, x, ssh::Channel::AA) / ssh::corr_asymptotic(p, x, ssh::Channel::AA));
      worst_lo = std::min(worst_lo, r);
      worst_hi = std::max(worst_hi, r);
    }
  }
  v.check(worst_lo >= 0.98 && worst_hi <= 1.02, fmt("|ratio| in [%.3g, %.3g]", worst_lo, worst_hi));
  const auto f = ssh::fit_exponents({});
  for (const auto& row : f.xi_table) {
    v.detail += fmt("; delta=%g xi_fit=%.3f xi=%.3f p=%.3f", row.delta, row.xi_fit, row.xi_formula, row.power);
  }
  v.check(std::abs(f.mean_power + 0.5) <= 0.05, fmt("power %.3f (eta %.3f)", f.mean_power, f.eta));
  v.check(std::abs(f.nu - 1.0) <= 0.05, fmt("nu %.3f", f.nu));
  return v;
}

// ------------------------------------------------------------------ 4

Verdict ssh_entanglement() {
  Verdict v;
  const std::vector<int> la{10, 15, 20, 30, 40, 50, 60, 70, 80};
  const auto broken = ent::ee_scaling_fit({1, 1, 1}, 400, la, ssh::Filling::ImNeg);
  v.check(std::abs(broken.slope - 1.0 / 6.0) <= 0.05 && broken.classification == ent::ScalingLaw::SubareaLaw,
          fmt("PT-broken slope %.4f (%s)", broken.slope, ent::to_string(broken.classification)));
  const auto gapped = ent::ee_scaling_fit({1, 2.5, 1}, 400, la, ssh::Filling::ImNeg);
  v.check(std::abs(gapped.slope) <= 0.05, fmt("PT-unbroken slope %.2e", gapped.slope));
  return v;
}

// ------------------------------------------------------------------ 5

Verdict theorem1() {
  Verdict v;
  constexpr double kFloor = 1e-10;
  for (int L = 2; L <= 8; ++L) {
    std::vector<double> eps;
    bool all_found = true;
    for (double beta : {25.0, 50.0, 100.0}) {
      const auto chk = xxz::theorem1_consistency(L, beta);
      for (const auto& r : chk.rows) all_found = all_found && r.found;
      eps.push_back(chk.max_distance);
    }
    v.check(all_found, fmt("L=%d partners found", L));
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
      const bool floor = eps[i] < kFloor && eps[i + 1] < kFloor;
      v.check(floor || eps[i] / eps[i + 1] >= 1.8,
              fmt("L=%d eps %.2e -> %.2e (x%.2f)", L, eps[i], eps[i + 1], eps[i] / std::max(eps[i + 1], 1e-300)));
    }
    if (L <= 6) v.check(eps.back() <= 5e-3, fmt("L=%d eps(100)=%.2e <= 5e-3", L, eps.back()));
  }
  return v;
}

// ------------------------------------------------------------------ 6

Verdict zero_line() {
  Verdict v;
  const int L = 6;
  const double beta = 100.0;
  const auto chk = xxz::theorem1_consistency(L, beta);
  double spread = 0.0;
  for (const auto& r : chk.rows) {
    const double predicted = 1.0 - (L - 1) * std::log(std::abs(r.z)) / beta;
    spread = std::max(spread, std::abs(r.numeric.real() - predicted));
  }
  v.check(spread <= 1e-3, fmt("max |Re Delta_num - Re Delta_pred| = %.2e", spread));
  const double period = 2.0 * std::numbers::pi * (L - 1) / beta;
  const auto loc = xxz::locate_zeros_numeric({0.9, 1.1, 0.0, 2.0 * period}, L, 1.0, beta, {});
  const double density = static_cast<double>(loc.zeros.size()) / (2.0 * period);
  const double g = xxz::zero_density(L, beta);
  v.check(std::abs(density / g - 1.0) <= 0.1,
          fmt("%zu zeros over Im length %.4f: density %.3f vs g %.3f", loc.zeros.size(), 2.0 * period, density, g));
  return v;
}

// ------------------------------------------------------------------ 7

Verdict sbae() {
  Verdict v;
  double worst1 = 0.0, worst2 = 0.0;
  for (int L = 2; L <= 12; ++L) {
    for (int M = 1; 2 * M <= L; ++M) {
      const auto s = xxz::sbae_solve(L, M);
      cplx s1{}, s2{};
      for (const cplx& z : s.zeta) {
        s1 += z;
        s2 += z * z;
      }
      worst1 = std::max(worst1, std::abs(s1));
      worst2 = std::max(worst2, std::abs(s2 + static_cast<double>(M * (M - 1)) / (L - 1)));
    }
  }
  v.check(worst1 <= 1e-10, fmt("max |sum zeta| %.2e", worst1));
  v.check(worst2 <= 1e-9, fmt("max |sum zeta^2 + M(M-1)/(L-1)| %.2e", worst2));
  return v;
}

// ------------------------------------------------------------------ 8

Verdict first_order() {
  Verdict v;
  double worst = 0.0;
  for (int L = 2; L <= 10; ++L) {
    for (int M = 0; M <= L; ++M) {
      const double exact = static_cast<double>(M * (L - M)) / (L - 1);
      const double slope = xxz::sector_energy_slope(L, M);
      const double err = exact == 0.0 ? std::abs(slope) : std::abs(slope / exact - 1.0);
      worst = std::max(worst, err);
    }
  }
  v.check(worst <= 1e-6, fmt("worst relative error %.2e", worst));
  return v;
}

// ------------------------------------------------------------------ 9

Verdict gap_scaling() {
  Verdict v;
  for (int L : {6, 8, 10}) {
    std::vector<double> errs;
    for (double d : {-0.05, -0.02, -0.01}) {
      const auto g = xxz::lowest_gap({1.0, cplx(1.0 + d, 0.0), L});
      errs.push_back(std::abs(g.gap / (-d / (L - 1)) - 1.0));
    }
    v.check(errs[0] <= 0.15, fmt("L=%d rel err %.3f at delta=-0.05", L, errs[0]));
    v.check(errs[1] < errs[0] && errs[2] < errs[1], fmt("L=%d err decreasing (%.4f, %.4f)", L, errs[1], errs[2]));
  }
  return v;
}

// ------------------------------------------------------------------ 10

Verdict xxz_entanglement() {
  Verdict v;
  const auto crit = xxz::xxz_entanglement({1.0, cplx(0.99, 0.01), 12});
  v.check(crit.b > 0.0 && crit.r_squared >= 0.95,
          fmt("Delta=0.99+0.01i: a=%.3f b=%.3f R^2=%.5f (M=%d)", crit.a, crit.b, crit.r_squared, crit.ground_sector));
  const auto ferro = xxz::xxz_entanglement({1.0, cplx(1.05, 0.0), 12});
  double smax = 0.0;
  for (double s : ferro.entropies) smax = std::max(smax, std::abs(s));
  v.check(smax <= 1e-10, fmt("Delta=1.05: max S %.1e", smax));
  return v;
}

// ------------------------------------------------------------------ 11

Eigen::Matrix4cd fock(const Eigen::Matrix2cd& h) {
  // Basis |0>, c_A^dag|0>, c_B^dag|0>, c_A^dag c_B^dag|0>.
  Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
  f.block<2, 2>(1, 1) = h;
  f(3, 3) = h.trace();
  return f;
}

std::string cli_output(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  std::vector<std::string> a{"yanglee"};
  a.insert(a.end(), args.begin(), args.end());
  if (yanglee::cli::run(a, out, err) != 0) return "error: " + err.str();
  return out.str();
}

Verdict properties() {
  Verdict v;
  {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ud(0.0, 2.0), uk(-std::numbers::pi, std::numbers::pi), ub(0.1, 5.0);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const ssh::Params p{ud(rng), ud(rng), ud(rng)};
      const double k = uk(rng), beta = ub(rng);
      const Eigen::Matrix4cd m = (-beta * fock(ssh::bloch_hamiltonian(p, k))).exp();
      const cplx z = ssh::mode_partition_factor(p, k, beta);
      worst = std::max(worst, std::abs(z - m.trace()) / std::max(1.0, std::abs(m.trace())));
    }
    v.check(worst <= 1e-10, fmt("Fock trace max rel err %.1e", worst));
  }
  {
    bool complete = true;
    for (int L = 2; L <= 12; ++L) {
      std::vector<char> seen(std::size_t{1} << L, 0);
      for (int M = 0; M <= L; ++M) {
        for (auto s : xxz::magnon_sector(L, M).basis) {
          complete = complete && std::popcount(s) == M && !seen[s];
          seen[s] = 1;
        }
      }
      complete = complete && std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    }
    v.check(complete, "sector bases partition the Fock space for L<=12");
  }
  {
    double worst = 0.0;
    for (int L : {4, 5, 7}) {
      const auto spec = xxz::full_spectrum({1.0, cplx(0.97, 0.04), L});
      for (int M = 0; M <= L; ++M) {
        auto a = spec[static_cast<std::size_t>(M)].values, b = spec[static_cast<std::size_t>(L - M)].values;
        std::vector<cplx> va(a.data(), a.data() + a.size()), vb(b.data(), b.data() + b.size());
        const auto lex = [](cplx x, cplx y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); };
        std::sort(va.begin(), va.end(), lex);
        std::sort(vb.begin(), vb.end(), lex);
        for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
      }
    }
    v.check(worst <= 1e-10, fmt("spin-flip spectra M <-> L-M differ by %.1e", worst));
  }
  {
    double worst = 0.0;
    for (double d : {0.3, 1.0, 1.7}) {
      for (cplx e : xxz::flatten_spectrum(xxz::full_spectrum({1.0, cplx(d, 0.0), 8}))) {
        worst = std::max(worst, std::abs(e.imag()));
      }
      worst = std::max(worst, std::abs(ssh::dispersion({0.0, d, 1.0}, 0.7).imag()));
    }
    v.check(worst <= 1e-10, fmt("Hermitian limit max |Im E| %.1e", worst));
  }
  {
    bool ok = true;
    for (int L = 2; L <= 20; ++L) {
      const auto p = xxz::theorem1_polynomial(L);
      const double a0 = p.coefficient(0).real(), an = p.coefficient(p.degree()).real();
      ok = ok && p.degree() == L * L / 4 && a0 == 2.0 && an == (L % 2 == 0 ? 1.0 : 2.0);
    }
    v.check(ok, "a0=2, a_N=1 (even L) or 2 (odd L), N=floor(L^2/4) for L<=20");
  }
  {
    const std::vector<std::string> args{"xxz-zeros", "--L", "4", "--beta", "50", "--grid", "16", "--seed", "5"};
    const std::string a = cli_output(args), b = cli_output(args);
    v.check(!a.empty() && a.rfind("error", 0) != 0 && a == b, "CLI CSV byte-identical across runs");
    const std::vector<std::string> scan{"ssh-zeros-scan", "--wv-points", "31", "--T-points", "5"};
    auto t1 = scan, t3 = scan;
    t1.insert(t1.end(), {"--threads", "1"});
    t3.insert(t3.end(), {"--threads", "3"});
    v.check(cli_output(t1) == cli_output(t3), "CLI CSV independent of thread count");
  }
  return v;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "SSH Yang-Lee region boundary", 60, region_scan},
      {2, "SSH root count asymptote", 10, root_count},
      {3, "SSH near-critical correlations", 120, asymptotics},
      {4, "SSH entanglement scaling", 120, ssh_entanglement},
      {5, "XXZ polynomial zeros vs numeric zeros", 300, theorem1},
      {6, "XXZ zero line and density", 300, zero_line},
      {7, "SBAE sum rules", 10, sbae},
      {8, "First-order sector energies", 120, first_order},
      {9, "Gapless-side gap scaling", 120, gap_scaling},
      {10, "XXZ entanglement", 180, xxz_entanglement},
      {11, "Property suite", 120, properties},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.check(secs <= c.budget_seconds, fmt("runtime %.1fs <= %.0fs", secs, c.budget_seconds));
    if (!v.pass) ++failed;
    std::printf("%s criterion %d: %s (%s)\n", v.pass ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
