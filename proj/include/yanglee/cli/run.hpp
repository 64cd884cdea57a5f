#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "yanglee/entanglement.hpp"
#include "yanglee/errors.hpp"
#include "yanglee/ssh.hpp"
#include "yanglee/xxz.hpp"

#ifndef YANGLEE_VERSION
#define YANGLEE_VERSION "unknown"
#endif

namespace yanglee::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

using Json = nlohmann::ordered_json;

/// Shortest round-trip-stable text for a double at 12 significant digits.
inline std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

/// Rows of JSON scalars rendered as CSV (header first) or as a JSON array of
/// objects keyed by column.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<Json> row) {
    if (row.size() != header_.size()) throw Error("Table: row width differs from header");
    rows_.push_back(std::move(row));
  }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t size() const { return rows_.size(); }

  std::string csv() const {
    std::string s;
    for (std::size_t i = 0; i < header_.size(); ++i) s += (i ? "," : "") + header_[i];
    s += '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + cell(r[i]);
      s += '\n';
    }
    return s;
  }

  std::string json() const {
    Json arr = Json::array();
    for (const auto& r : rows_) {
      Json o = Json::object();
      for (std::size_t i = 0; i < r.size(); ++i) o[header_[i]] = r[i];
      arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
  }

 private:
  static std::string cell(const Json& v) {
    if (v.is_number_float()) return num(v.get<double>());
    if (v.is_number()) return v.dump();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  }

  std::vector<std::string> header_;
  std::vector<std::vector<Json>> rows_;
};

struct GlobalOptions {
  std::string out = "-";
  std::string manifest;
  std::string format = "csv";
  int threads = 1;
  std::int64_t seed = 0;
  /// NaN: each command uses its own default.
  double tol = std::numeric_limits<double>::quiet_NaN();
};

struct CommandResult {
  Table table{{}};
  Json summary = Json::object();
  std::vector<std::string> warnings;
};

namespace detail {

inline Json complex_pair(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline double tol_or(const GlobalOptions& g, double fallback) { return std::isnan(g.tol) ? fallback : g.tol; }

inline std::vector<double> linspace(double a, double b, int n) {
  if (n < 1) throw DomainError("grid must have at least one point");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

inline ssh::Channel parse_channel(const std::string& s) {
  if (s == "AA") return ssh::Channel::AA;
  if (s == "AB") return ssh::Channel::AB;
  if (s == "BA") return ssh::Channel::BA;
  if (s == "BB") return ssh::Channel::BB;
  throw DomainError("unknown channel " + s);
}

inline ssh::Filling parse_filling(const std::string& s) {
  if (s == "ImNeg") return ssh::Filling::ImNeg;
  if (s == "ImPos") return ssh::Filling::ImPos;
  if (s == "BothBands") return ssh::Filling::BothBands;
  throw DomainError("unknown filling " + s);
}

}  // namespace detail

// ---------------------------------------------------------------- ssh

struct SshZerosScanArgs {
  double u = 1.0;
  double mean_hopping = 1.0;
  double wv_min = -1.9;
  double wv_max = 1.9;
  int wv_points = 200;
  double t_min = 0.005;
  double t_max = 0.1;
  int t_points = 50;
  std::vector<double> temperatures;
};

inline CommandResult ssh_zeros_scan(const SshZerosScanArgs& a, const GlobalOptions& g) {
  ssh::RegionScanOptions o;
  o.u = a.u;
  o.mean_hopping = a.mean_hopping;
  o.w_minus_v = detail::linspace(a.wv_min, a.wv_max, a.wv_points);
  o.temperatures = a.temperatures.empty() ? detail::linspace(a.t_min, a.t_max, a.t_points) : a.temperatures;
  o.threads = g.threads;
  const auto scan = ssh::zeros_region_scan(o);
  CommandResult r;
  r.table = Table({"w_minus_v", "T", "has_zeros", "chi"});
  for (const auto& c : scan.cells) r.table.add({c.w_minus_v, c.temperature, c.has_zeros, c.chi});
  Json b = Json::array();
  for (const auto& e : scan.boundary) b.push_back({{"T", e.temperature}, {"left", e.left}, {"right", e.right}});
  r.summary["boundary"] = b;
  return r;
}

struct SshChiArgs {
  double u = 1.0, v = 1.0, w = 1.0, beta = 100.0;
};

inline CommandResult ssh_chi(const SshChiArgs& a, const GlobalOptions&) {
  const ssh::Params p{a.u, a.v, a.w};
  const auto zs = ssh::yang_lee_root_count(p, a.beta);
  const double formula = ssh::chi_asymptote(p, a.beta);
  CommandResult r;
  r.table = Table({"u", "v", "w", "beta", "chi", "formula", "ratio"});
  const double ratio = formula > 0.0 ? zs.chi / formula : std::numeric_limits<double>::quiet_NaN();
  r.table.add({a.u, a.v, a.w, a.beta, zs.chi, formula, ratio});
  Json roots = Json::array();
  for (const auto& e : zs.entries) roots.push_back({{"n", e.n}, {"k", e.k}, {"energy", detail::complex_pair(e.energy)}});
  r.summary["roots"] = roots;
  return r;
}

struct SshCorrArgs {
  double u = 1.0, v = 2.02, w = 1.0;
  std::string channel = "AA";
  std::string filling = "ImNeg";
  int x_min = 1;
  int x_max = 40;
};

inline CommandResult ssh_corr(const SshCorrArgs& a, const GlobalOptions& g) {
  if (a.x_min > a.x_max) throw DomainError("ssh-corr: x-min exceeds x-max");
  const ssh::Params p{a.u, a.v, a.w};
  const auto ch = detail::parse_channel(a.channel);
  ssh::CorrRealOptions co;
  co.tol = detail::tol_or(g, 1e-9);
  co.filling = detail::parse_filling(a.filling);
  const bool near_critical = ssh::critical_distance(p) > 0.0 && p.u > 0.0;
  const auto n = static_cast<std::size_t>(a.x_max - a.x_min + 1);
  std::vector<cplx> c(n), asym(n, cplx(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()));
  yanglee::detail::parallel_for(n, g.threads, [&](std::size_t i) {
    const int x = a.x_min + static_cast<int>(i);
    c[i] = ssh::corr_real(p, x, ch, co);
    if (near_critical && x > 0) asym[i] = ssh::corr_asymptotic(p, x, ch);
  });
  CommandResult r;
  r.table = Table({"x", "re_c", "im_c", "abs_c", "re_asym", "im_asym"});
  std::vector<double> xs, cs;
  for (std::size_t i = 0; i < n; ++i) {
    const int x = a.x_min + static_cast<int>(i);
    r.table.add({x, c[i].real(), c[i].imag(), std::abs(c[i]), asym[i].real(), asym[i].imag()});
    if (x > 0 && std::abs(c[i]) > 0.0) {
      xs.push_back(x);
      cs.push_back(std::abs(c[i]));
    }
  }
  r.summary["phase"] = ssh::to_string(ssh::phase_diagnostics(p).label);
  if (near_critical) {
    r.summary["xi_formula"] = ssh::correlation_length(p);
    r.summary["decay_length"] = 1.0 / ssh::decay_rate(p);
  }
  if (xs.size() >= 4) {
    const auto f = ssh::fit_decay(xs, cs);
    r.summary["fit"] = {{"xi", f.xi}, {"power", f.power}, {"amplitude", f.amplitude}, {"rms_residual", f.rms_residual}};
  }
  return r;
}

struct SshEEArgs {
  double u = 1.0, v = 1.0, w = 1.0;
  int L = 400;
  std::vector<int> subsystems{10, 15, 20, 30, 40, 50, 60, 80};
  std::string filling = "ImNeg";
  std::string convention = "LR";
};

inline CommandResult ssh_ee(const SshEEArgs& a, const GlobalOptions& g) {
  const ssh::Params p{a.u, a.v, a.w};
  const auto conv = a.convention == "LR"   ? entanglement::Convention::LR
                    : a.convention == "RR" ? entanglement::Convention::RR
                                           : throw DomainError("unknown convention " + a.convention);
  const auto fit = entanglement::ee_scaling_fit(p, a.L, a.subsystems, detail::parse_filling(a.filling), conv, g.threads);
  CommandResult r;
  r.table = Table({"L_A", "re_S", "im_S"});
  for (std::size_t i = 0; i < fit.subsystems.size(); ++i) {
    r.table.add({fit.subsystems[i], fit.entropies[i].real(), fit.entropies[i].imag()});
  }
  r.summary["slope"] = fit.slope;
  r.summary["intercept"] = fit.intercept;
  r.summary["r_squared"] = fit.r_squared;
  r.summary["classification"] = entanglement::to_string(fit.classification);
  return r;
}

// ---------------------------------------------------------------- xxz

struct XxzPolyArgs {
  int L = 4;
};

inline CommandResult xxz_poly(const XxzPolyArgs& a, const GlobalOptions&) {
  const auto p = xxz::theorem1_polynomial(a.L);
  CommandResult r;
  r.table = Table({"exponent", "coefficient"});
  for (int m = 0; m <= p.degree(); ++m) {
    const double c = p.coefficient(m).real();
    if (c != 0.0) r.table.add({m, static_cast<long long>(c)});
  }
  r.summary["degree"] = p.degree();
  return r;
}

struct XxzZerosArgs {
  int L = 6;
  double beta = 100.0;
  double J = 1.0;
  double re_min = 0.9, re_max = 1.1, im_min = 0.0, im_max = 0.2;
  int grid = 40;
  bool analytic = false;
  int n_min = 0, n_max = 0;
  std::string map = "corrected";
};

inline xxz::ZeroMap parse_map(const std::string& s) {
  if (s == "corrected") return xxz::ZeroMap::Corrected;
  if (s == "literal") return xxz::ZeroMap::Literal;
  throw DomainError("unknown zero map " + s);
}

inline CommandResult xxz_zeros(const XxzZerosArgs& a, const GlobalOptions& g) {
  xxz::ZeroSearchOptions o;
  o.grid_re = o.grid_im = a.grid;
  o.threads = g.threads;
  o.residual_tol = detail::tol_or(g, o.residual_tol);
  const auto map = parse_map(a.map);
  const auto loc = xxz::locate_zeros_numeric({a.re_min, a.re_max, a.im_min, a.im_max}, a.L, a.J, a.beta, o);
  CommandResult r;
  r.table = Table({"re_delta", "im_delta", "provenance", "residual"});
  if (a.analytic) {
    for (const auto& z : xxz::theorem1_zeros(a.L, a.beta, a.J, {a.n_min, a.n_max}, map).zeros) {
      r.table.add({z.delta_aniso.real(), z.delta_aniso.imag(), xxz::to_string(z.provenance), z.residual});
    }
  }
  for (const auto& z : loc.zeros) {
    r.table.add({z.delta_aniso.real(), z.delta_aniso.imag(), xxz::to_string(z.provenance), z.residual});
  }
  r.warnings = loc.warnings;
  r.summary["numeric_zeros"] = loc.zeros.size();
  r.summary["zero_density"] = xxz::zero_density(a.L, a.beta, a.J);
  return r;
}

struct XxzVerifyArgs {
  int L = 6;
  double beta = 100.0;
  double J = 1.0;
  int grid = 40;
  std::string map = "corrected";
};

inline CommandResult xxz_verify_theorem1(const XxzVerifyArgs& a, const GlobalOptions& g) {
  xxz::ZeroSearchOptions o;
  o.grid_re = o.grid_im = a.grid;
  o.threads = g.threads;
  o.residual_tol = detail::tol_or(g, o.residual_tol);
  const auto chk = xxz::theorem1_consistency(a.L, a.beta, a.J, o, parse_map(a.map));
  CommandResult r;
  r.table = Table({"re_analytic", "im_analytic", "re_numeric", "im_numeric", "distance", "residual", "max_distance"});
  for (const auto& row : chk.rows) {
    r.table.add({row.analytic.real(), row.analytic.imag(), row.numeric.real(), row.numeric.imag(), row.distance,
                 row.residual, chk.max_distance});
  }
  r.warnings = chk.numeric.warnings;
  r.summary["max_distance"] = chk.max_distance;
  r.summary["numeric_zeros"] = chk.numeric.zeros.size();
  r.summary["window"] = {chk.window.re_min, chk.window.re_max, chk.window.im_min, chk.window.im_max};
  return r;
}

struct XxzSbaeArgs {
  int L = 8;
  /// 0: every M in 1..L/2.
  int M = 0;
};

inline CommandResult xxz_sbae(const XxzSbaeArgs& a, const GlobalOptions& g) {
  std::vector<int> ms;
  if (a.M > 0) {
    ms.push_back(a.M);
  } else {
    for (int m = 1; 2 * m <= a.L; ++m) ms.push_back(m);
  }
  xxz::SBAEOptions so;
  so.seed = static_cast<std::uint64_t>(g.seed);
  if (!std::isnan(g.tol)) so.tol = g.tol;
  CommandResult r;
  r.table = Table({"L", "M", "j", "re_zeta", "im_zeta"});
  Json rules = Json::array();
  for (int m : ms) {
    const auto s = xxz::sbae_solve(a.L, m, so);
    cplx s1{}, s2{};
    for (std::size_t j = 0; j < s.zeta.size(); ++j) {
      r.table.add({a.L, m, static_cast<int>(j), s.zeta[j].real(), s.zeta[j].imag()});
      s1 += s.zeta[j];
      s2 += s.zeta[j] * s.zeta[j];
    }
    rules.push_back({{"M", m},
                     {"abs_sum", std::abs(s1)},
                     {"sum_sq_error", std::abs(s2 + static_cast<double>(m * (m - 1)) / (a.L - 1))},
                     {"residual", s.residual},
                     {"attempts", s.attempts}});
  }
  r.summary["sum_rules"] = rules;
  return r;
}

struct XxzEEArgs {
  int L = 12;
  double re_delta = 0.99, im_delta = 0.01;
  double J = 1.0;
};

inline CommandResult xxz_ee(const XxzEEArgs& a, const GlobalOptions& g) {
  const auto prof = xxz::xxz_entanglement({a.J, cplx(a.re_delta, a.im_delta), a.L}, {}, g.threads);
  CommandResult r;
  r.table = Table({"L_A", "S"});
  for (std::size_t i = 0; i < prof.cuts.size(); ++i) r.table.add({prof.cuts[i], prof.entropies[i]});
  r.summary["a"] = prof.a;
  r.summary["b"] = prof.b;
  r.summary["r_squared"] = prof.r_squared;
  r.summary["ground_sector"] = prof.ground_sector;
  r.summary["ground_energy"] = detail::complex_pair(prof.ground_energy);
  return r;
}

struct XxzGapArgs {
  std::vector<int> L{6, 8, 10};
  std::vector<double> delta{-0.05};
  double J = 1.0;
};

inline CommandResult xxz_gap(const XxzGapArgs& a, const GlobalOptions& g) {
  CommandResult r;
  r.table = Table({"L", "delta", "gap_ed", "gap_formula", "ratio"});
  for (int L : a.L) {
    for (double d : a.delta) {
      const auto gap = xxz::lowest_gap({a.J, cplx(1.0 + d, 0.0), L}, 1e-9, g.threads);
      const auto f = xxz::magnon_energy_and_gap(L, L / 2, a.J, d);
      const double formula = d < 0.0 ? f.gap_gapless : f.gap_gapped;
      r.table.add({L, d, gap.gap, formula, gap.gap / formula});
    }
  }
  return r;
}

struct XxzSusceptibilityArgs {
  int L = 12;
  double J = 1.0;
  std::vector<double> delta{-0.02, -0.05, -0.1};
  std::vector<double> h{1e-6, 1e-5, 1e-4};
};

inline CommandResult xxz_susceptibility(const XxzSusceptibilityArgs& a, const GlobalOptions&) {
  const auto s = xxz::susceptibility_scaling(a.L, a.J, a.delta, a.h);
  CommandResult r;
  r.table = Table({"delta", "h", "m_star", "chi", "chi_integer"});
  for (const auto& p : s.points) r.table.add({p.delta, p.h, p.m_star, p.chi, p.chi_integer});
  r.summary["sigma_fit"] = s.sigma_fit;
  r.summary["chi_h0"] = s.chi_h0;
  return r;
}

// ---------------------------------------------------------------- driver

namespace detail {

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("failed writing " + path);
}

inline Json option_values(const CLI::App* app) {
  Json params = Json::object();
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->get_name() == "--help" || opt->get_name().empty()) continue;
    std::string name = opt->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    const auto& res = opt->results();
    if (!res.empty()) {
      params[name] = res.size() == 1 ? Json(res.front()) : Json(res);
    } else if (!opt->get_default_str().empty()) {
      params[name] = opt->get_default_str();
    } else if (opt->get_type_size() == 0) {
      params[name] = "false";
    }
  }
  return params;
}

inline Json diagnostic(const char* kind, const std::exception& e) {
  Json d{{"error", kind}, {"message", e.what()}};
  if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) {
    d["residual"] = ce->residual();
    Json best = Json::array();
    for (const auto& z : ce->best_iterate()) best.push_back(complex_pair(z));
    d["best_iterate"] = best;
    d["residual_history"] = ce->residual_history();
  }
  if (const auto* qe = dynamic_cast<const QuadratureError*>(&e)) {
    d["partial_result"] = complex_pair(qe->partial_result());
    d["error_estimate"] = qe->error_estimate();
  }
  return d;
}

}  // namespace detail

/// Parses argv, runs one subcommand, writes its table to --out (stdout by
/// default) and, with --manifest, a JSON run record. Returns 0 on success,
/// 1 on a usage or input error, 2 on a numerical failure.
inline int run(const std::vector<std::string>& argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Yang-Lee zeros and entanglement transitions in non-Hermitian SSH and XXZ chains", "yanglee"};
  app.set_version_flag("--version", std::string(YANGLEE_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--out", g.out, "CSV/JSON output path, '-' for stdout")->capture_default_str();
  app.add_option("--manifest", g.manifest, "JSON run manifest path");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--tol", g.tol, "Tolerance override for the command's main numerical step");

  std::function<CommandResult()> action;
  const auto sub = [&](const char* name, const char* desc, const char* columns) {
    auto* s = app.add_subcommand(name, desc);
    s->footer(std::string("CSV columns: ") + columns);
    return s;
  };

  SshZerosScanArgs zs;
  auto* c1 = sub("ssh-zeros-scan", "Yang-Lee zero presence over (w-v, T)", "w_minus_v,T,has_zeros,chi");
  c1->add_option("--u", zs.u)->capture_default_str();
  c1->add_option("--mean-hopping", zs.mean_hopping, "(v+w)/2")->capture_default_str();
  c1->add_option("--wv-min", zs.wv_min)->capture_default_str();
  c1->add_option("--wv-max", zs.wv_max)->capture_default_str();
  c1->add_option("--wv-points", zs.wv_points)->capture_default_str();
  c1->add_option("--T-min", zs.t_min)->capture_default_str();
  c1->add_option("--T-max", zs.t_max)->capture_default_str();
  c1->add_option("--T-points", zs.t_points)->capture_default_str();
  c1->add_option("--T", zs.temperatures, "Explicit temperatures (overrides the T grid)")->delimiter(',');
  c1->callback([&] { action = [&] { return ssh_zeros_scan(zs, g); }; });

  SshChiArgs sc;
  auto* c2 = sub("ssh-chi", "Number of Yang-Lee roots against beta sqrt(u^2-(v-w)^2)/(2 pi)",
                 "u,v,w,beta,chi,formula,ratio");
  c2->add_option("--u", sc.u)->capture_default_str();
  c2->add_option("--v", sc.v)->capture_default_str();
  c2->add_option("--w", sc.w)->capture_default_str();
  c2->add_option("--beta", sc.beta)->capture_default_str();
  c2->callback([&] { action = [&] { return ssh_chi(sc, g); }; });

  SshCorrArgs cr;
  auto* c3 = sub("ssh-corr", "Ground-state real-space correlations and near-critical closed forms",
                 "x,re_c,im_c,abs_c,re_asym,im_asym");
  c3->add_option("--u", cr.u)->capture_default_str();
  c3->add_option("--v", cr.v)->capture_default_str();
  c3->add_option("--w", cr.w)->capture_default_str();
  c3->add_option("--channel", cr.channel)->check(CLI::IsMember({"AA", "AB", "BA", "BB"}))->capture_default_str();
  c3->add_option("--filling", cr.filling)->check(CLI::IsMember({"ImNeg", "ImPos", "BothBands"}))->capture_default_str();
  c3->add_option("--x-min", cr.x_min)->capture_default_str();
  c3->add_option("--x-max", cr.x_max)->capture_default_str();
  c3->callback([&] { action = [&] { return ssh_corr(cr, g); }; });

  SshEEArgs ee;
  auto* c4 = sub("ssh-ee", "Entanglement entropy scaling of the SSH ground state", "L_A,re_S,im_S");
  c4->add_option("--u", ee.u)->capture_default_str();
  c4->add_option("--v", ee.v)->capture_default_str();
  c4->add_option("--w", ee.w)->capture_default_str();
  c4->add_option("--L", ee.L, "Ring length in unit cells")->capture_default_str();
  c4->add_option("--LA", ee.subsystems, "Subsystem sizes in unit cells")->delimiter(',')->capture_default_str();
  c4->add_option("--filling", ee.filling)->check(CLI::IsMember({"ImNeg", "ImPos", "BothBands"}))->capture_default_str();
  c4->add_option("--convention", ee.convention)->check(CLI::IsMember({"LR", "RR"}))->capture_default_str();
  c4->callback([&] { action = [&] { return ssh_ee(ee, g); }; });

  XxzPolyArgs xp;
  auto* c5 = sub("xxz-poly", "Coefficients of sum_M z^{M(L-M)}", "exponent,coefficient");
  c5->add_option("--L", xp.L)->capture_default_str();
  c5->callback([&] { action = [&] { return xxz_poly(xp, g); }; });

  XxzZerosArgs xz;
  auto* c6 = sub("xxz-zeros", "Zeros of the XXZ partition function in a complex Delta window",
                 "re_delta,im_delta,provenance,residual");
  c6->add_option("--L", xz.L)->capture_default_str();
  c6->add_option("--beta", xz.beta)->capture_default_str();
  c6->add_option("--J", xz.J)->capture_default_str();
  c6->add_option("--re-min", xz.re_min)->capture_default_str();
  c6->add_option("--re-max", xz.re_max)->capture_default_str();
  c6->add_option("--im-min", xz.im_min)->capture_default_str();
  c6->add_option("--im-max", xz.im_max)->capture_default_str();
  c6->add_option("--grid", xz.grid, "Plaquettes per axis")->capture_default_str();
  c6->add_flag("--analytic", xz.analytic, "Also list the polynomial-predicted zeros");
  c6->add_option("--n-min", xz.n_min)->capture_default_str();
  c6->add_option("--n-max", xz.n_max)->capture_default_str();
  c6->add_option("--map", xz.map)->check(CLI::IsMember({"corrected", "literal"}))->capture_default_str();
  c6->callback([&] { action = [&] { return xxz_zeros(xz, g); }; });

  XxzVerifyArgs xv;
  auto* c7 = sub("xxz-verify-theorem1", "Pair polynomial-predicted zeros with numeric partition-function zeros",
                 "re_analytic,im_analytic,re_numeric,im_numeric,distance,residual,max_distance");
  c7->add_option("--L", xv.L)->capture_default_str();
  c7->add_option("--beta", xv.beta)->capture_default_str();
  c7->add_option("--J", xv.J)->capture_default_str();
  c7->add_option("--grid", xv.grid)->capture_default_str();
  c7->add_option("--map", xv.map)->check(CLI::IsMember({"corrected", "literal"}))->capture_default_str();
  c7->callback([&] { action = [&] { return xxz_verify_theorem1(xv, g); }; });

  XxzSbaeArgs sb;
  auto* c8 = sub("xxz-sbae", "Solve the simplified Bethe equations", "L,M,j,re_zeta,im_zeta");
  c8->add_option("--L", sb.L)->capture_default_str();
  c8->add_option("--M", sb.M, "Magnon number, 0 for all M <= L/2")->capture_default_str();
  c8->callback([&] { action = [&] { return xxz_sbae(sb, g); }; });

  XxzEEArgs xe;
  auto* c9 = sub("xxz-ee", "Entanglement entropy of the XXZ right ground state", "L_A,S");
  c9->add_option("--L", xe.L)->capture_default_str();
  c9->add_option("--re-delta", xe.re_delta, "Re Delta")->capture_default_str();
  c9->add_option("--im-delta", xe.im_delta, "Im Delta")->capture_default_str();
  c9->add_option("--J", xe.J)->capture_default_str();
  c9->callback([&] { action = [&] { return xxz_ee(xe, g); }; });

  XxzGapArgs xg;
  auto* c10 = sub("xxz-gap", "Lowest real-part gap from exact diagonalization against the magnon formula",
                  "L,delta,gap_ed,gap_formula,ratio");
  c10->add_option("--L", xg.L)->delimiter(',')->capture_default_str();
  c10->add_option("--delta", xg.delta, "Delta - 1 (real)")->delimiter(',')->capture_default_str();
  c10->add_option("--J", xg.J)->capture_default_str();
  c10->callback([&] { action = [&] { return xxz_gap(xg, g); }; });

  XxzSusceptibilityArgs xs;
  auto* c11 = sub("xxz-susceptibility", "Zero-field susceptibility scaling on the gapless side",
                  "delta,h,m_star,chi,chi_integer");
  c11->add_option("--L", xs.L)->capture_default_str();
  c11->add_option("--J", xs.J)->capture_default_str();
  c11->add_option("--delta", xs.delta)->delimiter(',')->capture_default_str();
  c11->add_option("--field", xs.h, "Longitudinal field h")->delimiter(',')->capture_default_str();
  c11->callback([&] { action = [&] { return xxz_susceptibility(xs, g); }; });

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << YANGLEE_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  Json manifest;
  manifest["command"] = chosen->get_name();
  Json params = detail::option_values(&app);
  const Json sub_params = detail::option_values(chosen);
  for (const auto& [k, v] : sub_params.items()) params[k] = v;
  manifest["parameters"] = params;
  manifest["seed"] = g.seed;
  manifest["versions"] = std::string("yanglee ") + YANGLEE_VERSION;

  const auto t0 = std::chrono::steady_clock::now();
  const auto finish = [&](const char* status) {
    manifest["status"] = status;
    manifest["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!g.manifest.empty()) detail::write_file(g.manifest, manifest.dump(2) + "\n");
  };

  int code = kExitOk;
  try {
    const CommandResult res = action();
    const std::string text = g.format == "json" ? res.table.json() : res.table.csv();
    Json outputs = Json::array();
    if (g.out.empty() || g.out == "-") {
      out << text;
      out.flush();
    } else {
      detail::write_file(g.out, text);
      outputs.push_back(g.out);
    }
    manifest["outputs"] = outputs;
    manifest["rows"] = res.table.size();
    manifest["summary"] = res.summary;
    manifest["warnings"] = res.warnings;
    for (const auto& w : res.warnings) err << "warning: " << w << "\n";
    finish("ok");
    return kExitOk;
  } catch (const SingularityError& e) {
    manifest["diagnostic"] = detail::diagnostic("SingularityError", e);
    code = kExitNumerical;
  } catch (const DomainError& e) {
    manifest["diagnostic"] = detail::diagnostic("DomainError", e);
    code = kExitUsage;
  } catch (const ConvergenceError& e) {
    manifest["diagnostic"] = detail::diagnostic("ConvergenceError", e);
    code = kExitNumerical;
  } catch (const QuadratureError& e) {
    manifest["diagnostic"] = detail::diagnostic("QuadratureError", e);
    code = kExitNumerical;
  } catch (const std::exception& e) {
    manifest["diagnostic"] = detail::diagnostic("Error", e);
    code = kExitNumerical;
  }
  manifest["outputs"] = Json::array();
  err << manifest["diagnostic"].dump() << "\n";
  if (code == kExitUsage) err << chosen->help();
  try {
    finish("failed");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return code;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace yanglee::cli
