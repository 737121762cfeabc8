#include "nslab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <random>

#include "nslab/harness.hpp"
#include "nslab/io.hpp"
#include "nslab/product_checks.hpp"
#include "nslab/radial_decay.hpp"

namespace nslab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

json load_config(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") {
      std::ifstream in(args[i + 1]);
      if (!in) throw std::invalid_argument("cannot read config file: " + args[i + 1]);
      json j;
      in >> j;
      return j;
    }
  return json::object();
}

template <class T>
T jget(const json& j, const std::string& sec, const std::string& key, T dflt) {
  if (j.contains(sec) && j[sec].contains(key)) return j[sec][key].get<T>();
  return dflt;
}

struct ModelOptions {
  std::string preset = "ideal";
  double R = 1.0, C_v = 1.0, rho_inf = 1.0, T_inf = 1.0;
  double alpha = 0.1, bcoef = 1.0, delta = 3.0;
  std::vector<double> pi0{0.0}, pi1{0.0, 1.0}, mu{1.0}, lam{0.0}, kappa{1.0};

  void add_flags(CLI::App* app, const json& cfg) {
    preset = jget(cfg, "model", "preset", preset);
    R = jget(cfg, "model", "R", R);
    C_v = jget(cfg, "model", "C_v", C_v);
    rho_inf = jget(cfg, "model", "rho_inf", rho_inf);
    T_inf = jget(cfg, "model", "T_inf", T_inf);
    alpha = jget(cfg, "model", "alpha", alpha);
    bcoef = jget(cfg, "model", "b", bcoef);
    delta = jget(cfg, "model", "delta", delta);
    pi0 = jget(cfg, "model", "pi0", pi0);
    pi1 = jget(cfg, "model", "pi1", pi1);
    mu = jget(cfg, "model", "mu", mu);
    lam = jget(cfg, "model", "lam", lam);
    kappa = jget(cfg, "model", "kappa", kappa);
    app->add_option("--preset", preset, "model preset: ideal, vdw, custom-poly");
    app->add_option("--R", R, "ideal-gas constant");
    app->add_option("--Cv", C_v, "heat capacity");
    app->add_option("--rho-inf", rho_inf, "equilibrium density");
    app->add_option("--T-inf", T_inf, "equilibrium temperature");
    app->add_option("--alpha", alpha, "vdw cohesion coefficient");
    app->add_option("--bcoef", bcoef, "vdw thermal-pressure coefficient");
    app->add_option("--delta", delta, "vdw excluded-volume scale");
    app->add_option("--pi0", pi0, "custom-poly: pi0 coefficients")->delimiter(',');
    app->add_option("--pi1", pi1, "custom-poly: pi1 coefficients")->delimiter(',');
    app->add_option("--mu", mu, "custom-poly: mu coefficients")->delimiter(',');
    app->add_option("--lam", lam, "custom-poly: lam coefficients")->delimiter(',');
    app->add_option("--kappa", kappa, "custom-poly: kappa coefficients")->delimiter(',');
  }

  PhysicalModel build() const {
    if (preset == "ideal") return ideal_gas_model(R, C_v, rho_inf, T_inf);
    if (preset == "vdw") return vdw_model(alpha, bcoef, delta, C_v, rho_inf, T_inf);
    if (preset == "custom-poly") return custom_poly_model(pi0, pi1, mu, lam, kappa, C_v, rho_inf, T_inf);
    throw std::invalid_argument("unknown model preset: " + preset);
  }

  json echo() const {
    json j{{"preset", preset}, {"R", R}, {"C_v", C_v}, {"rho_inf", rho_inf}, {"T_inf", T_inf}};
    if (preset == "vdw") {
      j["alpha"] = alpha;
      j["b"] = bcoef;
      j["delta"] = delta;
    }
    if (preset == "custom-poly") {
      j["pi0"] = pi0;
      j["pi1"] = pi1;
      j["mu"] = mu;
      j["lam"] = lam;
      j["kappa"] = kappa;
    }
    return j;
  }
};

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> t;
  if (n == 1) {
    t.push_back(hi);
    return t;
  }
  for (int i = 0; i < n; ++i) t.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return t;
}

void emit(const fs::path& dir, const std::string& name, const std::string& content) {
  fs::create_directories(dir);
  io::write_text_atomic((dir / name).string(), content);
}

void emit_json(const fs::path& dir, const std::string& name, const json& j) {
  emit(dir, name, j.dump(2) + "\n");
}

int finish(const json& summary, const fs::path& outdir, const std::string& name, bool all_pass) {
  emit_json(outdir, name, summary);
  return all_pass ? 0 : 1;
}

void print_check(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.empty() ? "" : ": ",
              detail.c_str());
}

// ---------------------------------------------------------------- lp-check

int cmd_lp_check(std::vector<std::string> args, const json& cfg) {
  CLI::App app{"dyadic partition / Besov machinery self-checks"};
  app.allow_extras();
  int dim = jget(cfg, "grid", "dim", 3), n = jget(cfg, "grid", "n", 64);
  double length = jget(cfg, "grid", "length", 2.0 * std::numbers::pi);
  int jmin = jget(cfg, "partition", "j_min", 99), jmax = jget(cfg, "partition", "j_max", -99);
  int j0 = jget(cfg, "partition", "j0", 0);
  int trials = jget(cfg, "lp_check", "trials", 50);
  std::uint64_t seed = jget<std::uint64_t>(cfg, "lp_check", "seed", 7);
  std::string outdir = jget<std::string>(cfg, "output", "dir", "out");
  app.add_option("--dim", dim);
  app.add_option("--n", n);
  app.add_option("--length", length);
  app.add_option("--jmin", jmin);
  app.add_option("--jmax", jmax);
  app.add_option("--j0", j0);
  app.add_option("--trials", trials);
  app.add_option("--seed", seed);
  app.add_option("--out", outdir);
  std::string config_file;
  app.add_option("--config", config_file);
  app.parse(args);

  const Grid g = make_grid(dim, n, length);
  // default block range: cover every resolved nonzero mode
  if (jmin == 99) jmin = static_cast<int>(std::floor(std::log2(g.fundamental() * 0.75)));
  if (jmax == -99) jmax = static_cast<int>(std::ceil(std::log2(g.max_freq() * 4.0 / 3.0)));
  const LpPartition part = build_partition(jmin, jmax, j0);

  json checks = json::array();
  bool all = true;

  {  // partition of unity over every resolved radius in the covered range
    const auto [lo, hi] = part.covered_range();
    double dev = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double rho = std::sqrt(g.xi2(i));
      if (rho < lo || rho > hi) continue;
      dev = std::max(dev, std::abs(part.partition_sum(rho) - 1.0));
    }
    const bool pass = dev <= 1e-8;
    all &= pass;
    print_check("partition-of-unity", pass, "max deviation " + io::fmt(dev));
    checks.push_back({{"name", "partition-of-unity"}, {"pass", pass}, {"max_deviation", dev}});
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_field_local = [&]() {
    std::vector<cplx> c(g.size(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g.on_nyquist(i) || g.xi2(i) == 0.0) continue;
      c[i] = cplx{gauss(rng), gauss(rng)};
    }
    SpectralField f(g, std::move(c));
    hermitize(f);
    return f;
  };

  {  // quasi-orthogonality: blocks two apart annihilate exactly
    double worst = 0.0;
    for (int t = 0; t < 5; ++t) {
      const SpectralField f = random_field_local();
      const int j = j0;
      const SpectralField b = dyadic_block(f, j, part);
      for (int dj : {-3, -2, 2, 3}) {
        if (j + dj < part.j_min || j + dj > part.j_max) continue;
        worst = std::max(worst, l2_norm_spectral(dyadic_block(b, j + dj, part)));
      }
    }
    const bool pass = worst == 0.0;
    all &= pass;
    print_check("quasi-orthogonality", pass, "residual " + io::fmt(worst));
    checks.push_back({{"name", "quasi-orthogonality"}, {"pass", pass}, {"residual", worst}});
  }

  {  // Bernstein window on random block fields
    double lo = 1e300, hi = 0.0;
    const int jb = std::min(part.j_max - 1, j0 + 1);
    for (int t = 0; t < trials; ++t) {
      const SpectralField f = dyadic_block(random_field_local(), jb, part);
      if (!(lp_norm(f, 2.0) > 0.0)) continue;
      const double r = bernstein_ratio(f, jb, 1, 2.0, 2.0);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    const bool pass = lo >= 0.25 && hi <= 8.0 / 3.0 + 0.1;
    all &= pass;
    print_check("bernstein-window", pass, "[" + io::fmt(lo) + ", " + io::fmt(hi) + "]");
    checks.push_back({{"name", "bernstein-window"}, {"pass", pass}, {"lo", lo}, {"hi", hi}});
  }

  {  // embedding directions
    double worst_left = 0.0, worst_right = 0.0, worst_mono = 0.0;
    for (int t = 0; t < trials; ++t) {
      const SpectralField f = random_field_local();
      const double l2 = lp_norm(f, 2.0);
      const double binf = besov_norm(f, BesovParams{0.0, 2.0, kInf}, part);
      const double bone = besov_norm(f, BesovParams{0.0, 2.0, 1.0}, part);
      worst_left = std::max(worst_left, binf / l2);
      worst_right = std::max(worst_right, l2 / bone);
      worst_mono = std::max(worst_mono, binf / bone);
    }
    const bool pass = worst_left <= 3.0 && worst_right <= 1.0 + 1e-10 && worst_mono <= 1.0 + 1e-10;
    all &= pass;
    print_check("embeddings", pass,
                "sup<=Lp " + io::fmt(worst_left) + ", Lp<=sum " + io::fmt(worst_right));
    checks.push_back({{"name", "embeddings"},
                      {"pass", pass},
                      {"sup_over_lp", worst_left},
                      {"lp_over_sum", worst_right}});
  }

  json summary{{"schema", 1},
               {"subcommand", "lp-check"},
               {"config",
                {{"grid", {{"dim", dim}, {"n", n}, {"length", length}}},
                 {"partition", {{"j_min", jmin}, {"j_max", jmax}, {"j0", j0}}},
                 {"lp_check", {{"trials", trials}, {"seed", seed}}}}},
               {"checks", checks},
               {"pass", all}};
  return finish(summary, outdir, "lp_check.json", all);
}

// --------------------------------------------------------- symbol-spectrum

int cmd_symbol_spectrum(std::vector<std::string> args, const json& cfg) {
  CLI::App app{"eigenvalue sweep of the linear symbol over |xi|"};
  app.allow_extras();
  ModelOptions model;
  model.add_flags(&app, cfg);
  double rho_min = jget(cfg, "spectrum", "rho_min", 1e-3);
  double rho_max = jget(cfg, "spectrum", "rho_max", 1e3);
  int count = jget(cfg, "spectrum", "count", 241);
  std::string outdir = jget<std::string>(cfg, "output", "dir", "out");
  app.add_option("--rho-min", rho_min);
  app.add_option("--rho-max", rho_max);
  app.add_option("--count", count);
  app.add_option("--out", outdir);
  std::string config_file;
  app.add_option("--config", config_file);
  app.parse(args);

  const PhysicalModel m = model.build();
  const DerivedConstants c = derive_constants(m);
  const auto rows = symbol_eigen_sweep(log_grid(rho_min, rho_max, count), 3, c);

  std::vector<std::vector<double>> table;
  double worst = -1e300;
  for (const auto& r : rows) {
    std::vector<double> row{r.rho};
    for (std::size_t k = 0; k < r.re.size(); ++k) {
      row.push_back(r.re[k]);
      row.push_back(r.im[k]);
      worst = std::max(worst, r.re[k]);
    }
    table.push_back(std::move(row));
  }
  emit(outdir, "symbol_spectrum.csv",
       io::csv({"rho", "re1", "im1", "re2", "im2", "re3", "im3", "re4", "im4", "re5", "im5"}, table));

  const bool pass = worst <= 1e-12;
  print_check("spectral-stability", pass, "max real part " + io::fmt(worst));
  json summary{{"schema", 1},
               {"subcommand", "symbol-spectrum"},
               {"config",
                {{"model", model.echo()},
                 {"spectrum", {{"rho_min", rho_min}, {"rho_max", rho_max}, {"count", count}}}}},
               {"max_real_part", worst},
               {"pass", pass}};
  return finish(summary, outdir, "symbol_spectrum.json", pass);
}

// ------------------------------------------------------------ linear-decay

int cmd_linear_decay(std::vector<std::string> args, const json& cfg) {
  CLI::App app{"semigroup decay via radial quadrature"};
  app.allow_extras();
  ModelOptions model;
  model.add_flags(&app, cfg);
  double s1 = jget(cfg, "decay", "s1", 1.5);
  std::vector<double> svals = jget(cfg, "decay", "s", std::vector<double>{0.0});
  int jmin = jget(cfg, "decay", "j_min", -24);
  int j0 = jget(cfg, "decay", "j0", 0);
  double tmin = jget(cfg, "decay", "t_min", 1.0);
  double tmax = jget(cfg, "decay", "t_max", 1e4);
  int nt = jget(cfg, "decay", "nt", 25);
  double fit_window = jget(cfg, "decay", "fit_window", 0.5);
  double tol = jget(cfg, "decay", "tol", 0.05);
  bool with_bound = jget(cfg, "decay", "decay_bound", true);
  int bound_jmin = jget(cfg, "decay", "bound_j_min", -6);
  bool heat = jget(cfg, "decay", "heat", false);
  double heat_p = jget(cfg, "decay", "heat_p", 2.0);
  double heat_q = jget(cfg, "decay", "heat_q", 1.0);
  double heat_tol = jget(cfg, "decay", "heat_tol", 0.03);
  std::string outdir = jget<std::string>(cfg, "output", "dir", "out");
  bool svg = jget(cfg, "output", "svg", false);
  app.add_option("--s1", s1);
  app.add_option("--s", svals, "measurement regularities")->delimiter(',');
  app.add_option("--jmin", jmin);
  app.add_option("--j0", j0);
  app.add_option("--tmin", tmin);
  app.add_option("--tmax", tmax);
  app.add_option("--nt", nt);
  app.add_option("--fit-window", fit_window);
  app.add_option("--tol", tol);
  app.add_flag("--decay-bound,!--no-decay-bound", with_bound, "fit the low-block decay-rate bound");
  app.add_option("--bound-jmin", bound_jmin);
  app.add_flag("--heat", heat, "also fit the pure heat-flow rate (gaussian data)");
  app.add_option("--heat-p", heat_p);
  app.add_option("--heat-q", heat_q);
  app.add_option("--heat-tol", heat_tol);
  app.add_option("--out", outdir);
  app.add_flag("--svg", svg);
  std::string config_file;
  app.add_option("--config", config_file);
  app.parse(args);

  const PhysicalModel m = model.build();
  const DerivedConstants c = derive_constants(m);
  const double s0 = s0_endpoint(2.0, 3);
  if (!(s1 > 1.0 - 1.5 && s1 <= s0))
    throw std::invalid_argument("linear-decay: require 1 - d/2 < s1 <= 2d/p - d/2 (regularity window)");

  const auto t_grid = log_grid(tmin, tmax, nt);
  bool all = true;
  json fits = json::array();
  for (std::size_t is = 0; is < svals.size(); ++is) {
    const double s = svals[is];
    if (!(s + s1 > 0.0)) throw std::invalid_argument("linear-decay: require s + s1 > 0");
    const auto run = radial::run_linear_decay(s1, s, jmin, j0, 3, c, t_grid, fit_window);
    const bool pass = std::abs(run.fit.exponent - run.target) <= tol;
    all &= pass;
    print_check("linear-decay s1=" + io::fmt(s1) + " s=" + io::fmt(s), pass,
                "fitted " + io::fmt(run.fit.exponent) + " target " + io::fmt(run.target));
    fits.push_back({{"s", s},
                    {"s1", s1},
                    {"fitted", run.fit.exponent},
                    {"target", run.target},
                    {"r2", run.fit.r2},
                    {"reliable", run.fit.reliable},
                    {"pass", pass}});

    std::vector<std::vector<double>> blocks, norms;
    for (std::size_t it = 0; it < run.times.size(); ++it) {
      for (std::size_t jb = 0; jb < run.blocks.size(); ++jb)
        blocks.push_back({run.times[it], static_cast<double>(run.blocks[jb]), run.block_norms[it][jb]});
      norms.push_back({run.times[it], run.low_norm[it], run.weighted_norm[it]});
    }
    const std::string tag = std::to_string(is);
    emit(outdir, "linear_blocks_" + tag + ".csv", io::csv({"t", "j", "block_norm"}, blocks));
    emit(outdir, "linear_norms_" + tag + ".csv", io::csv({"t", "norm_s_2_1", "weighted_norm"}, norms));
    if (svg) {
      std::vector<std::pair<double, double>> series;
      for (std::size_t it = 0; it < run.times.size(); ++it) series.emplace_back(run.times[it], run.low_norm[it]);
      emit(outdir, "linear_norms_" + tag + ".svg",
           io::svg_loglog(series, run.target, "low-frequency norm, s=" + io::fmt(s)));
    }
  }

  json summary{{"schema", 1},
               {"subcommand", "linear-decay"},
               {"config",
                {{"model", model.echo()},
                 {"decay",
                  {{"s1", s1}, {"s", svals}, {"j_min", jmin}, {"j0", j0}, {"t_min", tmin},
                   {"t_max", tmax}, {"nt", nt}, {"fit_window", fit_window}, {"tol", tol}}}}},
               {"fits", fits}};

  if (with_bound) {
    const DecayBoundFit fit = fit_semigroup_decay_bound(bound_jmin, j0, j0, c);
    const bool pass = fit.c0 > 0.0 && fit.C <= 10.0;
    all &= pass;
    print_check("decay-bound", pass, "c0 " + io::fmt(fit.c0) + " C " + io::fmt(fit.C));
    json perj = json::object();
    for (const auto& [j, C] : fit.per_j_C) perj[std::to_string(j)] = C;
    summary["decay_bound"] = {{"c0", fit.c0}, {"C", fit.C}, {"per_j_C", perj}, {"pass", pass}};
  }
  if (heat) {
    const auto hr = radial::heat_kernel_rate(radial::gaussian_profile(), heat_p, heat_q, 3,
                                             log_grid(10.0, 1e4, 25), fit_window);
    const bool pass = std::abs(hr.fit.exponent - hr.target) <= heat_tol;
    all &= pass;
    print_check("heat-rate", pass, "fitted " + io::fmt(hr.fit.exponent) + " target " + io::fmt(hr.target));
    summary["heat"] = {{"p", heat_p}, {"q", heat_q}, {"fitted", hr.fit.exponent},
                       {"target", hr.target}, {"pass", pass}};
  }
  summary["pass"] = all;
  return finish(summary, outdir, "linear_decay.json", all);
}

// --------------------------------------------------------- nonlinear-decay

int cmd_nonlinear_decay(std::vector<std::string> args, const json& cfg) {
  CLI::App app{"full-system desk-scale decay run"};
  app.allow_extras();
  ModelOptions model;
  model.add_flags(&app, cfg);
  int n = jget(cfg, "grid", "n", 32);
  double length = jget(cfg, "grid", "length", 40.0 * std::numbers::pi);
  int jmin = jget(cfg, "partition", "j_min", -8);
  int jmax = jget(cfg, "partition", "j_max", 2);
  int j0 = jget(cfg, "partition", "j0", 0);
  double amplitude = jget(cfg, "decay", "amplitude", 1e-2);
  double s1 = jget(cfg, "decay", "s1", 1.5);
  double p = jget(cfg, "decay", "p", 2.0);
  double eps = jget(cfg, "decay", "eps", 0.05);
  bool eps_zero = jget(cfg, "decay", "eps_zero", false);
  double tmin = jget(cfg, "decay", "t_min", 0.25);
  double tmax = jget(cfg, "decay", "t_max", 50.0);
  int nt = jget(cfg, "decay", "nt", 28);
  double dt = jget(cfg, "decay", "dt", 0.1);
  double fit_s = jget(cfg, "decay", "fit_s", 0.0);
  double fit_tmin = jget(cfg, "decay", "fit_t_min", 5.0);
  double tol = jget(cfg, "decay", "tol", 0.15);
  std::uint64_t seed = jget<std::uint64_t>(cfg, "decay", "seed", 1);
  bool linear_only = jget(cfg, "decay", "linear_only", false);
  std::string outdir = jget<std::string>(cfg, "output", "dir", "out");
  bool svg = jget(cfg, "output", "svg", false);
  app.add_option("--n", n);
  app.add_option("--length", length);
  app.add_option("--jmin", jmin);
  app.add_option("--jmax", jmax);
  app.add_option("--j0", j0);
  app.add_option("--amplitude", amplitude);
  app.add_option("--s1", s1);
  app.add_option("--p", p);
  app.add_option("--eps", eps);
  app.add_flag("--eps-zero", eps_zero, "stronger-data variant with eps = 0");
  app.add_option("--tmin", tmin);
  app.add_option("--tmax", tmax);
  app.add_option("--nt", nt);
  app.add_option("--dt", dt);
  app.add_option("--fit-s", fit_s);
  app.add_option("--fit-tmin", fit_tmin);
  app.add_option("--tol", tol);
  app.add_option("--seed", seed);
  app.add_flag("--linear-only", linear_only);
  app.add_option("--out", outdir);
  app.add_flag("--svg", svg);
  std::string config_file;
  app.add_option("--config", config_file);
  app.parse(args);

  DecayConfig dc;
  dc.s1 = s1;
  dc.p = p;
  dc.eps = eps;
  dc.eps_zero = eps_zero;
  dc.t_grid = log_grid(tmin, tmax, nt);
  dc.fit_s = fit_s;
  dc.seed = seed;
  dc.validate();

  const Grid g = make_grid(3, n, length);
  const LpPartition part = build_partition(jmin, jmax, j0);
  const PhysicalModel m = model.build();

  {  // coverage warning
    const State probe = make_initial_data(dc, amplitude, g, part);
    const double frac = uncovered_mass_fraction(probe.a, part);
    if (frac > 0.01)
      std::fprintf(stderr, "warning: %.2f%% of the initial L2 mass lies outside covered blocks\n",
                   100.0 * frac);
  }

  const DecayRecord rec = run_nonlinear_decay(dc, amplitude, g, part, m, dt, linear_only);

  // record CSV: one row per sample, columns mirroring the decay functional
  std::vector<std::string> header{"t"};
  const auto sg = dc.s_grid();
  for (double s : sg) header.push_back("low_s" + io::fmt(s));
  for (double s : sg) header.push_back("wlow_s" + io::fmt(s));
  header.insert(header.end(), {"low_fit", "high_grad_a_v", "high_theta", "high_grad_v_theta",
                               "en_low_inf", "en_low_l1", "en_high_l1", "D_p", "X_p"});
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rec.rows.size(); ++i) {
    const auto& r = rec.rows[i];
    std::vector<double> row{r.t};
    row.insert(row.end(), r.low.begin(), r.low.end());
    row.insert(row.end(), r.low_weighted.begin(), r.low_weighted.end());
    row.insert(row.end(), {r.low_fit, r.high_grad_a_v, r.high_theta, r.high_grad_v_theta,
                           r.en_low_inf, r.en_low_l1, r.en_high_l1, rec.d_functional[i],
                           rec.x_functional[i]});
    rows.push_back(std::move(row));
  }
  emit(outdir, "nonlinear_record.csv", io::csv(header, rows));

  // fit of the dedicated low norm on [fit_tmin, tmax]
  std::vector<std::pair<double, double>> series;
  for (const auto& r : rec.rows)
    if (r.t >= fit_tmin && r.low_fit > 0.0) series.emplace_back(r.t, r.low_fit);
  const double target = -0.5 * (s1 + fit_s);
  json summary{{"schema", 1},
               {"subcommand", "nonlinear-decay"},
               {"config",
                {{"model", model.echo()},
                 {"grid", {{"dim", 3}, {"n", n}, {"length", length}}},
                 {"partition", {{"j_min", jmin}, {"j_max", jmax}, {"j0", j0}}},
                 {"decay",
                  {{"amplitude", amplitude}, {"s1", s1}, {"p", p}, {"eps", eps},
                   {"eps_zero", eps_zero}, {"t_min", tmin}, {"t_max", tmax}, {"nt", nt},
                   {"dt", dt}, {"fit_s", fit_s}, {"fit_t_min", fit_tmin}, {"tol", tol},
                   {"seed", seed}, {"linear_only", linear_only}}}}}};

  bool all = true;
  const bool stable = !rec.density_floor_hit && rec.min_density_seen >= 0.1;
  all &= stable;
  print_check("solver-stability", stable, "min density " + io::fmt(rec.min_density_seen));
  summary["stability"] = {{"pass", stable},
                          {"min_density", rec.min_density_seen},
                          {"floor_hit", rec.density_floor_hit}};

  if (series.size() >= 8) {
    const RateFit fit = fit_rate(series, 1.0);
    const bool pass = std::abs(fit.exponent - target) <= tol;
    all &= pass;
    print_check("low-norm-decay", pass, "fitted " + io::fmt(fit.exponent) + " target " + io::fmt(target));
    summary["fit"] = {{"fitted", fit.exponent}, {"target", target}, {"r2", fit.r2},
                      {"reliable", fit.reliable}, {"pass", pass}};
  } else {
    all = false;
    print_check("low-norm-decay", false, "insufficient samples in fit window");
    summary["fit"] = {{"pass", false}, {"reason", "insufficient samples"}};
  }

  {  // boundedness of the decay functional relative to its first sample
    double d1 = 0.0, dmax = 0.0;
    for (std::size_t i = 0; i < rec.rows.size(); ++i) {
      if (d1 == 0.0 && rec.rows[i].t >= 1.0) d1 = rec.d_functional[i];
      dmax = std::max(dmax, rec.d_functional[i]);
    }
    const double ratio = d1 > 0.0 ? dmax / d1 : 0.0;
    const bool pass = d1 > 0.0 && ratio <= 10.0;
    all &= pass;
    print_check("decay-functional-bound", pass, "max/first ratio " + io::fmt(ratio));
    summary["functional_bound"] = {{"ratio", ratio}, {"pass", pass}};
  }

  if (svg) {
    std::vector<std::pair<double, double>> plot;
    for (const auto& r : rec.rows)
      if (r.low_fit > 0.0) plot.emplace_back(r.t, r.low_fit);
    emit(outdir, "nonlinear_decay.svg", io::svg_loglog(plot, target, "low-frequency norm"));
  }
  summary["pass"] = all;
  return finish(summary, outdir, "nonlinear_decay.json", all);
}

// ------------------------------------------------------------ product-check

int cmd_product_check(std::vector<std::string> args, const json& cfg) {
  CLI::App app{"bilinear and composition estimate trials"};
  app.allow_extras();
  std::vector<std::string> checks = jget(cfg, "product", "checks", std::vector<std::string>{"all"});
  int trials = jget(cfg, "product", "trials", 200);
  int n = jget(cfg, "product", "n", 32);
  double s1 = jget(cfg, "product", "s1", 1.0);
  std::uint64_t seed = jget<std::uint64_t>(cfg, "product", "seed", 12345);
  std::string outdir = jget<std::string>(cfg, "output", "dir", "out");
  app.add_option("--checks", checks)->delimiter(',');
  app.add_option("--trials", trials);
  app.add_option("--n", n);
  app.add_option("--s1", s1);
  app.add_option("--seed", seed);
  app.add_option("--out", outdir);
  std::string config_file;
  app.add_option("--config", config_file);
  app.parse(args);

  std::vector<std::string> ids;
  if (checks.size() == 1 && checks[0] == "all")
    ids = product_check_ids();
  else
    ids = checks;

  bool all = true;
  json results = json::array();
  std::vector<std::vector<double>> table;
  for (const std::string& id : ids) {
    ProductCheckConfig pc;
    pc.id = id;
    pc.trials = trials;
    pc.n = n;
    pc.s1 = s1;
    pc.seed = seed;
    const RatioStats st = run_product_check(pc);
    const bool pass = st.all_finite && (st.median == 0.0 ? st.max == 0.0 : st.max <= 10.0 * st.median);
    all &= pass;
    print_check("product " + id, pass,
                "max " + io::fmt(st.max) + " median " + io::fmt(st.median) +
                    (st.smallest_n0 >= 0 ? " N0 " + std::to_string(st.smallest_n0) : ""));
    results.push_back({{"id", id}, {"trials", st.trials}, {"max", st.max}, {"median", st.median},
                       {"all_finite", st.all_finite}, {"smallest_n0", st.smallest_n0}, {"pass", pass}});
    table.push_back({static_cast<double>(table.size()), st.max, st.median,
                     static_cast<double>(st.smallest_n0)});
  }
  emit(outdir, "product_check.csv", io::csv({"index", "max", "median", "smallest_n0"}, table));
  json summary{{"schema", 1},
               {"subcommand", "product-check"},
               {"config",
                {{"product", {{"checks", ids}, {"trials", trials}, {"n", n}, {"s1", s1}, {"seed", seed}}}}},
               {"results", results},
               {"pass", all}};
  return finish(summary, outdir, "product_check.json", all);
}

// -------------------------------------------------------------- ineq-check

int cmd_ineq_check(std::vector<std::string> args, const json& cfg) {
  CLI::App app{"time-weighted convolution bound sweeps"};
  app.allow_extras();
  std::vector<std::string> pairs = jget(cfg, "ineq", "pairs",
                                        std::vector<std::string>{"0.5:1.25", "1:1.5", "1.2:1.25"});
  double tmax = jget(cfg, "ineq", "t_max", 1e3);
  std::string outdir = jget<std::string>(cfg, "output", "dir", "out");
  app.add_option("--pairs", pairs, "sigma1:sigma2 list")->delimiter(',');
  app.add_option("--tmax", tmax);
  app.add_option("--out", outdir);
  std::string config_file;
  app.add_option("--config", config_file);
  app.parse(args);

  bool all = true;
  json results = json::array();
  for (const std::string& pr : pairs) {
    const auto colon = pr.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("ineq-check: pair must be sigma1:sigma2");
    const double s1v = std::stod(pr.substr(0, colon));
    const double s2v = std::stod(pr.substr(colon + 1));
    const double sup = check_convolution_inequality(s1v, s2v, tmax);
    const double sup2 = check_convolution_inequality(s1v, s2v, tmax, true);
    const double drift = std::abs(sup - sup2) / std::max(sup, 1e-300);
    const bool pass = std::isfinite(sup) && drift <= 0.01;
    all &= pass;
    print_check("ineq " + pr, pass, "sup " + io::fmt(sup) + " refinement drift " + io::fmt(drift));
    results.push_back({{"sigma1", s1v}, {"sigma2", s2v}, {"sup", sup}, {"refined", sup2},
                       {"drift", drift}, {"pass", pass}});
  }
  json summary{{"schema", 1},
               {"subcommand", "ineq-check"},
               {"config", {{"ineq", {{"pairs", pairs}, {"t_max", tmax}}}}},
               {"results", results},
               {"pass", all}};
  return finish(summary, outdir, "ineq_check.json", all);
}

// ------------------------------------------------------------------ report

int cmd_report(std::vector<std::string> args, const json& cfg) {
  CLI::App app{"merge JSON summaries into one table"};
  app.allow_extras();
  std::vector<std::string> inputs = jget(cfg, "report", "inputs", std::vector<std::string>{});
  std::string outfile = jget<std::string>(cfg, "report", "out_file", "");
  app.add_option("--inputs", inputs)->delimiter(',');
  app.add_option("--out-file", outfile);
  std::string config_file;
  app.add_option("--config", config_file);
  app.parse(args);

  if (inputs.empty()) throw std::invalid_argument("report: no input summaries given");
  std::string table = "file\tsubcommand\tpass\n";
  bool all = true;
  for (const std::string& path : inputs) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("report: cannot read " + path);
    json j;
    in >> j;
    const bool pass = j.value("pass", false);
    all &= pass;
    table += path + "\t" + j.value("subcommand", "?") + "\t" + (pass ? "PASS" : "FAIL") + "\n";
  }
  std::fputs(table.c_str(), stdout);
  if (!outfile.empty()) io::write_text_atomic(outfile, table);
  return all ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  try {
    if (args.empty()) {
      std::fprintf(stderr,
                   "usage: nslab <lp-check|symbol-spectrum|linear-decay|nonlinear-decay|"
                   "product-check|ineq-check|report> [options]\n");
      return 2;
    }
    const json cfg = load_config(args);
    const std::string sub = args[0];
    // CLI11 parses reversed remainders
    std::vector<std::string> rest(args.begin() + 1, args.end());
    std::reverse(rest.begin(), rest.end());

    if (sub == "lp-check") return cmd_lp_check(rest, cfg);
    if (sub == "symbol-spectrum") return cmd_symbol_spectrum(rest, cfg);
    if (sub == "linear-decay") return cmd_linear_decay(rest, cfg);
    if (sub == "nonlinear-decay") return cmd_nonlinear_decay(rest, cfg);
    if (sub == "product-check") return cmd_product_check(rest, cfg);
    if (sub == "ineq-check") return cmd_ineq_check(rest, cfg);
    if (sub == "report") return cmd_report(rest, cfg);
    std::fprintf(stderr, "unknown subcommand: %s\n", sub.c_str());
    return 2;
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "argument error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace nslab
