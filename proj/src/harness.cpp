#include "nslab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "nslab/kernels.hpp"
#include "quad_util.hpp"

namespace nslab {

namespace {

double bracket(double t) { return std::sqrt(1.0 + t * t); }

double besov_high_tuple_grad(const SpectralField& f, const BesovParams& bp, const LpPartition& part) {
  return besov_norm_high(grad(f), bp, part);
}

// sum over components of the high norm of grad(v_c) (tuple convention)
double besov_high_grad_vec(const VectorField& v, const BesovParams& bp, const LpPartition& part) {
  double s = 0.0;
  for (const auto& comp : v.comp) s += besov_norm_high(grad(comp), bp, part);
  return s;
}

}  // namespace

std::vector<double> DecayConfig::s_grid() const {
  const double lo = eps_eff() - s1;
  const double hi = 0.5 * dim + 1.0;
  std::vector<double> out;
  if (s_grid_points == 1) {
    out.push_back(hi);
    return out;
  }
  for (int i = 0; i < s_grid_points; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / (s_grid_points - 1));
  return out;
}

void DecayConfig::validate() const {
  if (dim < 3) throw std::invalid_argument("decay config: require dim >= 3");
  if (!(p >= 2.0 && p < dim))
    throw std::invalid_argument("decay config: require 2 <= p < d (Lebesgue window)");
  if (!(p <= 2.0 * dim / (dim - 2.0)))
    throw std::invalid_argument("decay config: require p <= 2d/(d-2) (Lebesgue window)");
  const double s0 = s0_endpoint(p, dim);
  if (!(s1 > 1.0 - 0.5 * dim && s1 <= s0))
    throw std::invalid_argument("decay config: require 1 - d/2 < s1 <= 2d/p - d/2 (regularity window)");
  if (!eps_zero && !(eps > 0.0)) throw std::invalid_argument("decay config: require eps > 0");
  if (t_grid.empty()) throw std::invalid_argument("decay config: empty time grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("decay config: time grid must increase");
  if (s_grid_points < 1) throw std::invalid_argument("decay config: need at least one s sample");
}

State make_initial_data(const DecayConfig& cfg, double amplitude, const Grid& grid, const LpPartition& part) {
  cfg.validate();
  if (grid.dim() != cfg.dim) throw std::invalid_argument("make_initial_data: grid dimension mismatch");
  if (!(amplitude >= 0.0)) throw std::invalid_argument("make_initial_data: negative amplitude");
  // the grid must resolve at least one block at or below the split index;
  // partitions may extend further down (those blocks stay empty)
  if (grid.fundamental() > (8.0 / 3.0) * std::ldexp(1.0, part.j0))
    throw std::invalid_argument("make_initial_data: grid cannot resolve the requested low blocks");

  const double cutoff = std::ldexp(1.0, part.j0);
  const double guard = grid.max_freq();  // tapers only the outermost shell
  const double d2 = 0.5 * cfg.dim;
  const double tail_scale = std::pow(cutoff, cfg.s1 + 2.0);
  auto envelope = [&](double rho) {
    if (rho <= 0.0) return 0.0;
    const double low = LpPartition::chi(rho / cutoff) * std::pow(rho, cfg.s1 - d2);
    const double high = (1.0 - LpPartition::chi(rho / cutoff)) * tail_scale * std::pow(rho, -(d2 + 2.0));
    return (low + high) * LpPartition::chi(rho / guard);
  };

  State s(grid);
  if (amplitude == 0.0) return s;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto fill = [&](SpectralField& f) {
    auto& c = f.coeffs();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid.on_nyquist(i)) continue;
      const double rho = std::sqrt(grid.xi2(i));
      if (rho == 0.0) continue;
      const double amp = envelope(rho);
      if (amp == 0.0) continue;
      c[i] = amp * cplx{gauss(rng), gauss(rng)};
    }
    hermitize(f);
  };
  fill(s.a);
  for (int a = 0; a < grid.dim(); ++a) fill(s.v.comp[static_cast<std::size_t>(a)]);
  fill(s.theta);
  s.a.coeffs()[0] = cplx{0.0, 0.0};

  // normalize: sup_{j <= j0} 2^{-j s1} (block norm of the triple) = amplitude
  double sup = 0.0;
  for (int j = part.j_min; j <= part.j0; ++j) {
    const double bn = block_lp_norm(s.a, j, 2.0, part) + block_lp_norm(s.v, j, 2.0, part) +
                      block_lp_norm(s.theta, j, 2.0, part);
    sup = std::max(sup, std::pow(2.0, -j * cfg.s1) * bn);
  }
  if (sup == 0.0) throw std::invalid_argument("make_initial_data: no resolvable low-frequency content");
  const double scale = amplitude / sup;
  s.a = scale * s.a;
  s.v = scale * s.v;
  s.theta = scale * s.theta;
  return s;
}

DecayRow measure(const State& s, const DecayConfig& cfg, const LpPartition& part) {
  DecayRow row;
  row.t = s.time;
  const double dp = cfg.dim / cfg.p;
  const auto sg = cfg.s_grid();
  row.low.reserve(sg.size());
  row.low_weighted.reserve(sg.size());
  for (double sv : sg) {
    const BesovParams bp{sv, 2.0, 1.0};
    const double n = besov_norm_low(s.a, bp, part) + besov_norm_low(s.v, bp, part) +
                     besov_norm_low(s.theta, bp, part);
    row.low.push_back(n);
    row.low_weighted.push_back(std::pow(bracket(s.time), 0.5 * (cfg.s1 + sv)) * n);
  }

  const BesovParams fit_bp{cfg.fit_s, 2.0, 1.0};
  row.low_fit = besov_norm_low(s.a, fit_bp, part) + besov_norm_low(s.v, fit_bp, part) +
                besov_norm_low(s.theta, fit_bp, part);

  const BesovParams bp1{dp - 1.0, cfg.p, 1.0};
  const BesovParams bp2{dp - 2.0, cfg.p, 1.0};
  const BesovParams bp3{dp, cfg.p, 1.0};
  row.high_grad_a_v = besov_high_tuple_grad(s.a, bp1, part) + besov_norm_high(s.v, bp1, part);
  row.high_theta = besov_norm_high(s.theta, bp2, part);
  row.high_grad_v_theta = besov_high_grad_vec(s.v, bp3, part) + besov_norm_high(s.theta, bp3, part);

  const BesovParams el{0.5 * cfg.dim - 1.0, 2.0, 1.0};
  const BesovParams eh{0.5 * cfg.dim + 1.0, 2.0, 1.0};
  row.en_low_inf = besov_norm_low(s.a, el, part) + besov_norm_low(s.v, el, part) +
                   besov_norm_low(s.theta, el, part);
  row.en_low_l1 = besov_norm_low(s.a, eh, part) + besov_norm_low(s.v, eh, part) +
                  besov_norm_low(s.theta, eh, part);
  row.en_high_l1 = besov_norm_high(s.a, bp3, part) + besov_high_grad_vec(s.v, bp3, part) +
                   besov_norm_high(s.theta, bp3, part);
  return row;
}

namespace {

// per-block running sup of weight(t) * ||Delta_j z(t)||_p
struct BlockSup {
  std::map<int, double> sup;
  void update(const SpectralField& f, double w, double p, const LpPartition& part, int j_lo, int j_hi) {
    for (int j = j_lo; j <= j_hi; ++j) {
      const double v = w * block_lp_norm(f, j, p, part);
      auto [it, fresh] = sup.emplace(j, v);
      if (!fresh) it->second = std::max(it->second, v);
    }
  }
  void update(const VectorField& f, double w, double p, const LpPartition& part, int j_lo, int j_hi) {
    for (int j = j_lo; j <= j_hi; ++j) {
      const double v = w * block_lp_norm(f, j, p, part);
      auto [it, fresh] = sup.emplace(j, v);
      if (!fresh) it->second = std::max(it->second, v);
    }
  }
  double aggregate(double sigma) const {
    double s = 0.0;
    for (const auto& [j, v] : sup) s += std::pow(2.0, j * sigma) * v;
    return s;
  }
};

}  // namespace

DecayRecord run_nonlinear_decay(const DecayConfig& cfg, double amplitude, const Grid& grid,
                                const LpPartition& part, const PhysicalModel& model, double dt_nominal,
                                bool linear_only) {
  cfg.validate();
  const DerivedConstants consts = derive_constants(model);
  State s = make_initial_data(cfg, amplitude, grid, part);

  StepControls ctl;
  ctl.linear_only = linear_only;
  Integrator integ(model, consts, ctl);

  DecayRecord rec;
  rec.cfg = cfg;
  rec.min_density_seen = min_density(s);

  const double dp = cfg.dim / cfg.p;
  const int hi_lo = std::max(part.j_min, part.j0 - 1);
  const int hi_hi = part.j_max;
  const double alpha = cfg.alpha();
  const auto sg = cfg.s_grid();

  std::vector<double> w_sup(sg.size(), 0.0);  // running sup of weighted low norms
  BlockSup t_grad_a, t_v, t_theta2, t_grad_v, t_theta0;      // weighted (decay functional)
  BlockSup x_grad_a, x_v, x_theta2;                          // unweighted (energy functional)
  double x_low_sup = 0.0;
  double l1_low = 0.0, l1_high = 0.0;
  double prev_t = s.time;
  double prev_low = 0.0, prev_high = 0.0;

  const BesovParams bp3{dp, cfg.p, 1.0};
  const BesovParams eh{0.5 * cfg.dim + 1.0, 2.0, 1.0};

  auto l1_integrands = [&](const State& st, double& low, double& high) {
    low = besov_norm_low(st.a, eh, part) + besov_norm_low(st.v, eh, part) +
          besov_norm_low(st.theta, eh, part);
    high = besov_norm_high(st.a, bp3, part) + besov_high_grad_vec(st.v, bp3, part) +
           besov_norm_high(st.theta, bp3, part);
  };
  l1_integrands(s, prev_low, prev_high);

  auto on_step = [&](const State& st) {
    double low, high;
    l1_integrands(st, low, high);
    const double h = st.time - prev_t;
    l1_low += 0.5 * h * (prev_low + low);
    l1_high += 0.5 * h * (prev_high + high);
    prev_t = st.time;
    prev_low = low;
    prev_high = high;
    rec.min_density_seen = std::min(rec.min_density_seen, min_density(st));
  };

  auto sample = [&](const State& st) {
    const DecayRow row = measure(st, cfg, part);
    for (std::size_t i = 0; i < sg.size(); ++i) w_sup[i] = std::max(w_sup[i], row.low_weighted[i]);

    const double wb = std::pow(bracket(st.time), alpha);
    const double wt = std::pow(std::max(st.time, 0.0), alpha);
    const VectorField ga = grad(st.a);
    t_grad_a.update(ga, wb, cfg.p, part, hi_lo, hi_hi);
    t_v.update(st.v, wb, cfg.p, part, hi_lo, hi_hi);
    t_theta2.update(st.theta, wb, cfg.p, part, hi_lo, hi_hi);
    for (const auto& comp : st.v.comp) t_grad_v.update(grad(comp), wt, cfg.p, part, hi_lo, hi_hi);
    t_theta0.update(st.theta, wt, cfg.p, part, hi_lo, hi_hi);

    x_grad_a.update(ga, 1.0, cfg.p, part, hi_lo, hi_hi);
    x_v.update(st.v, 1.0, cfg.p, part, hi_lo, hi_hi);
    x_theta2.update(st.theta, 1.0, cfg.p, part, hi_lo, hi_hi);
    x_low_sup = std::max(x_low_sup, row.en_low_inf);

    rec.rows.push_back(row);
    double dsup = 0.0;
    for (double w : w_sup) dsup = std::max(dsup, w);
    const double dfun = dsup + t_grad_a.aggregate(dp - 1.0) + t_v.aggregate(dp - 1.0) +
                        t_theta2.aggregate(dp - 2.0) + t_grad_v.aggregate(dp) + t_theta0.aggregate(dp);
    const double xfun = x_low_sup + l1_low + x_grad_a.aggregate(dp - 1.0) + x_v.aggregate(dp - 1.0) +
                        x_theta2.aggregate(dp - 2.0) + l1_high;
    rec.d_functional.push_back(dfun);
    rec.x_functional.push_back(xfun);
  };

  for (double t : cfg.t_grid) {
    if (t <= s.time + 1e-14) {
      sample(s);
      continue;
    }
    try {
      s = integ.advance(std::move(s), t, dt_nominal, on_step);
    } catch (const std::runtime_error&) {
      rec.density_floor_hit = true;
      break;
    }
    sample(s);
  }
  return rec;
}

double lr_decay_target(const DecayConfig& cfg, double r, double s, int unknown) {
  if (!(r >= cfg.p)) throw std::invalid_argument("rate-target window: require r >= p");
  const double d = cfg.dim;
  const double s1t = cfg.s1 + d * (0.5 - 1.0 / cfg.p);
  const double w = s + d * (1.0 / cfg.p - 1.0 / r);
  const double upper = (unknown == 1) ? d / cfg.p + 1.0 : d / cfg.p;
  if (!(w > -s1t && w <= upper))
    throw std::invalid_argument("rate-target window: require -s1 - d(1/2-1/p) < s + d(1/p-1/r) <= d/p (+1 for velocity)");
  return -0.5 * (cfg.s1 + s) - 0.5 * d * (0.5 - 1.0 / r);
}

RateTargetCheck verify_rate_target(const std::vector<std::pair<double, double>>& series, double r, double s,
                                const DecayConfig& cfg, int unknown, double tol, double fit_window) {
  const double target = lr_decay_target(cfg, r, s, unknown);
  const RateFit fit = fit_rate(series, fit_window);
  return RateTargetCheck{fit.exponent, target, std::abs(fit.exponent - target) <= tol};
}

double check_convolution_inequality(double sigma1, double sigma2, double t_max, bool refine) {
  if (!(sigma1 >= 0.0)) throw std::invalid_argument("time-weight sweep: require sigma1 >= 0");
  if (!(sigma1 <= sigma2)) throw std::invalid_argument("time-weight sweep: require sigma1 <= sigma2");
  if (!(sigma2 > 1.0)) throw std::invalid_argument("time-weight sweep: require sigma2 > 1");

  const int base_panels = refine ? 2 : 1;
  auto integral = [&](double t) {
    // graded partition resolving both O(1)-width end layers of [0, t]
    std::vector<double> cuts{0.0};
    for (double step = 1.0; cuts.back() + step < 0.5 * t; step *= 2.0)
      cuts.push_back(cuts.back() + step);
    cuts.push_back(0.5 * t);
    std::vector<double> right{t};
    for (double step = 1.0; right.back() - step > 0.5 * t; step *= 2.0)
      right.push_back(right.back() - step);
    for (auto it = right.rbegin(); it != right.rend(); ++it) cuts.push_back(*it);

    auto f = [&](double tau) {
      return std::pow(bracket(t - tau), -sigma1) * std::pow(bracket(tau), -sigma2);
    };
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      if (!(cuts[i + 1] > cuts[i])) continue;
      const double len = (cuts[i + 1] - cuts[i]) / base_panels;
      for (int p = 0; p < base_panels; ++p)
        s += quad::integrate(f, cuts[i] + p * len, cuts[i] + (p + 1) * len);
    }
    return s;
  };

  double sup = 0.0;
  const int nt = 96;
  for (int i = 0; i <= nt; ++i) {
    const double t = 0.125 * std::pow(t_max / 0.125, static_cast<double>(i) / nt);
    sup = std::max(sup, std::pow(bracket(t), sigma1) * integral(t));
  }
  return sup;
}

double parabolic_regularity_ratio(const SpectralField& u0, const std::vector<SpectralField>& forcing,
                                  double t_end, double mu, double sigma, double rho1, double rho2,
                                  const LpPartition& part) {
  if (!(rho2 <= rho1)) throw std::invalid_argument("parabolic ratio: require rho2 <= rho1");
  if (!(mu > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("parabolic ratio: require mu, T > 0");
  const Grid& g = u0.grid();
  // subdivide each forcing interval so the time quadrature of the solution
  // norms resolves the fast modes (the forcing stays piecewise constant)
  const std::size_t nf = std::max<std::size_t>(forcing.size(), 1);
  const std::size_t sub = (63 + nf) / nf;
  const std::size_t nsub = nf * sub;
  const double dt = t_end / static_cast<double>(nsub);

  std::vector<SpectralField> snaps{u0};
  std::vector<double> weights;
  SpectralField u = u0;
  for (std::size_t kstep = 0; kstep < nsub; ++kstep) {
    std::vector<cplx> c(g.size());
    const std::size_t fidx = kstep / sub;
    const auto& fc = forcing.empty() ? u0 : forcing[fidx];
    kernels::for_each_index(g.size(), [&](std::size_t i) {
      const double z = -mu * g.xi2(i) * dt;
      const double e = std::exp(z);
      const double phi1 = z == 0.0 ? 1.0 : std::expm1(z) / z;
      const cplx fval = forcing.empty() ? cplx{0.0, 0.0} : fc.coeffs()[i];
      c[i] = e * u.coeffs()[i] + dt * phi1 * fval;
    });
    u = SpectralField(g, std::move(c));
    snaps.push_back(u);
  }
  weights.assign(snaps.size(), dt);
  weights.front() = 0.5 * dt;
  weights.back() = 0.5 * dt;

  const double inv_rho1 = std::isinf(rho1) ? 0.0 : 1.0 / rho1;
  const double inv_rho2 = std::isinf(rho2) ? 0.0 : 1.0 / rho2;
  const BesovParams lhs_bp{sigma + 2.0 * inv_rho1, 2.0, 1.0};
  const double lhs = std::pow(mu, inv_rho1) * chemin_lerner_norm(snaps, weights, rho1, lhs_bp, part);

  double rhs = besov_norm(u0, BesovParams{sigma, 2.0, 1.0}, part);
  if (!forcing.empty()) {
    // piecewise-constant forcing: interval lengths give the exact time norm
    std::vector<double> fw(forcing.size(), t_end / static_cast<double>(nf));
    const BesovParams rhs_bp{sigma - 2.0 + 2.0 * inv_rho2, 2.0, 1.0};
    rhs += std::pow(mu, inv_rho2 - 1.0) * chemin_lerner_norm(forcing, fw, rho2, rhs_bp, part);
  }
  if (!(rhs > 0.0)) throw std::invalid_argument("parabolic ratio: zero data (nothing to compare)");
  return lhs / rhs;
}

}  // namespace nslab
