#include "nslab/integrator.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace nslab {

namespace {

State as_state(NonlinearTerms&& t, double time) {
  State s;
  s.a = std::move(t.f);
  s.v = std::move(t.g);
  s.theta = std::move(t.k);
  s.time = time;
  return s;
}

long long double_bits(double x) {
  long long out;
  std::memcpy(&out, &x, sizeof out);
  return out;
}

}  // namespace

Integrator::Integrator(PhysicalModel model, DerivedConstants consts, StepControls controls)
    : model_(std::move(model)), consts_(consts), controls_(controls) {}

const SemigroupTable& Integrator::table_for(const Grid& g, double dt) {
  const auto key = std::make_pair(static_cast<long long>(g.n()) * 1000003 + g.dim(), double_bits(dt));
  auto it = tables_.find(key);
  if (it == tables_.end()) it = tables_.emplace(key, build_semigroup_table(g, dt, consts_, true)).first;
  return it->second;
}

double Integrator::stable_dt(const State& s) const {
  const Grid& g = s.grid();
  const double dx = g.dx();
  const CoefficientSet cs = make_coefficients(model_, consts_);

  double vmax = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const auto vals = to_physical(s.v.comp[static_cast<std::size_t>(a)]);
    for (double x : vals) vmax = std::max(vmax, std::abs(x));
  }
  double dt = controls_.dt_max;
  if (vmax > 0.0) dt = std::min(dt, controls_.advect_safety * dx / vmax);

  // variable-coefficient diffusion not handled by the integrating factor
  const auto avals = to_physical(s.a);
  double wmax = 0.0;
  for (double a : avals) {
    const double inv = 1.0 / (consts_.nu * (1.0 + a));
    const double visc = (2.0 * std::abs(cs.mu_t(a)) + std::abs(cs.lam_t(a))) * inv;
    const double cond = std::abs(cs.kap_t(a)) * inv;
    wmax = std::max(wmax, std::max(visc, cond));
  }
  if (wmax > 0.0) dt = std::min(dt, controls_.visc_safety * dx * dx / wmax);
  return dt;
}

State Integrator::attempt(const State& s, double dt, int depth) {
  const SemigroupTable& tbl = table_for(s.grid(), dt);

  State out;
  if (controls_.linear_only) {
    out = apply_semigroup_table(tbl, s);
  } else {
    State n0 = as_state(compute_fgk(s, model_, consts_), s.time);
    State ustar = apply_semigroup_table(tbl, s) + dt * apply_phi1(tbl, n0);
    ustar.time = s.time + dt;
    State n1 = as_state(compute_fgk(ustar, model_, consts_), ustar.time);
    out = ustar + dt * apply_phi2(tbl, n1 - n0);
  }
  out.time = s.time + dt;

  if (!controls_.linear_only && min_density(out) < controls_.density_floor) {
    if (depth >= controls_.max_halvings)
      throw std::runtime_error("Integrator::step: density floor violated after repeated halvings");
    const State half = attempt(s, 0.5 * dt, depth + 1);
    return attempt(half, 0.5 * dt, depth + 1);
  }
  return out;
}

State Integrator::step(const State& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("Integrator::step: dt must be positive");
  return attempt(s, dt, 0);
}

State Integrator::advance(State s, double t_end, double dt_nominal,
                          const std::function<void(const State&)>& on_step) {
  while (s.time < t_end - 1e-12 * std::max(1.0, t_end)) {
    double dt = std::min(dt_nominal, stable_dt(s));
    dt = std::min(dt, t_end - s.time);
    s = step(s, dt);
    if (on_step) on_step(s);
  }
  return s;
}

State step(const State& s, double dt, const PhysicalModel& model, const DerivedConstants& consts,
           StepControls controls) {
  Integrator integ(model, consts, controls);
  return integ.step(s, dt);
}

}  // namespace nslab
