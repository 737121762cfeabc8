#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nslab/fitting.hpp"
#include "nslab/integrator.hpp"
#include "nslab/lp.hpp"

namespace nslab {

/// Experiment parameters for decay measurement.
struct DecayConfig {
  int dim = 3;
  double s1 = 1.5;   ///< low-frequency regularity index, in (1 - d/2, s0]
  double p = 2.0;    ///< Lebesgue exponent, 2 <= p < d and p <= 2d/(d-2)
  double eps = 0.05; ///< the small loss in the high-frequency weight
  bool eps_zero = false;   ///< stronger-data variant: take eps = 0
  int s_grid_points = 9;   ///< discretization of the sup over s
  std::vector<double> t_grid;  ///< sample times (log-spaced by default)
  double fit_window = 0.1;     ///< trailing fraction of the log-time axis
  double fit_s = 0.0;          ///< regularity of the dedicated fit column
  std::uint64_t seed = 1;

  double eps_eff() const { return eps_zero ? 0.0 : eps; }
  double alpha() const { return s1 + 0.5 * dim + 0.5 - eps_eff(); }
  std::vector<double> s_grid() const;  ///< equispaced in [eps - s1, d/2 + 1]

  /// Throws with the violated constraint named.
  void validate() const;
};

/// One measured sample: every norm entering the decay functional and the
/// instantaneous pieces of the energy functional.
struct DecayRow {
  double t = 0.0;
  std::vector<double> low;        ///< Besov(s;2,1) low norms of (a,v,theta), per s in s_grid
  std::vector<double> low_weighted;  ///< <t>^{(s1+s)/2} * low
  double low_fit = 0.0;           ///< low norm at the dedicated fit regularity
  double high_grad_a_v = 0.0;     ///< (grad a, v) in B^{d/p-1}_{p,1}, high part
  double high_theta = 0.0;        ///< theta in B^{d/p-2}_{p,1}, high part
  double high_grad_v_theta = 0.0; ///< (grad v, theta) in B^{d/p}_{p,1}, high part
  double en_low_inf = 0.0;        ///< (a,v,theta) low in B^{d/2-1}_{2,1}
  double en_low_l1 = 0.0;         ///< integrand: low in B^{d/2+1}_{2,1}
  double en_high_l1 = 0.0;        ///< integrand: (a, grad v, theta) high in B^{d/p}_{p,1}
};

struct DecayRecord {
  DecayConfig cfg;
  std::vector<DecayRow> rows;
  std::vector<double> d_functional;  ///< running decay functional at sample times
  std::vector<double> x_functional;  ///< running energy functional at sample times
  double min_density_seen = 1.0;
  bool density_floor_hit = false;
};

/// Random-phase isotropic data with radial envelope rho^{s1-d/2} below
/// 2^{j0} and a smooth fast-decaying tail above; mean of a exactly zero;
/// scaled so that sup_{j<=j0} 2^{-j s1}||Delta_j U0|| equals `amplitude`.
/// Throws if the grid resolves none of the covered low blocks.
State make_initial_data(const DecayConfig& cfg, double amplitude, const Grid& grid, const LpPartition& part);

/// All norms of one state (one row of the record).
DecayRow measure(const State& s, const DecayConfig& cfg, const LpPartition& part);

/// Nonlinear run: integrate to the last sample time, measuring at cfg.t_grid
/// and accumulating the time-integrated and sup-in-time pieces.
DecayRecord run_nonlinear_decay(const DecayConfig& cfg, double amplitude, const Grid& grid,
                                const LpPartition& part, const PhysicalModel& model, double dt_nominal,
                                bool linear_only = false);

/// Closed-form decay target of || Lambda^s field ||_{L^r}: -(s1+s)/2 -
/// (d/2)(1/2 - 1/r). Validates the admissible (r, s) window for the given
/// unknown (0 = density, 1 = velocity, 2 = temperature); throws outside it.
double lr_decay_target(const DecayConfig& cfg, double r, double s, int unknown);

struct RateTargetCheck {
  double fitted;
  double target;
  bool pass;
};
RateTargetCheck verify_rate_target(const std::vector<std::pair<double, double>>& series, double r, double s,
                                const DecayConfig& cfg, int unknown, double tol, double fit_window);

/// sup over t <= t_max of <t>^{sigma1} * int_0^t <t-tau>^{-sigma1}
/// <tau>^{-sigma2} dtau, by graded Gauss panels; `refine` doubles the panel
/// count (stability probe). Rejects sigma1 < 0, sigma1 > sigma2, sigma2 <= 1.
double check_convolution_inequality(double sigma1, double sigma2, double t_max, bool refine = false);

/// Empirical constant of the heat-flow maximal-regularity bound:
/// mu^{1/rho1} ||u||_{CL(rho1, sigma + 2/rho1)} over
/// ||u0|| + mu^{1/rho2 - 1} ||f||_{CL(rho2, sigma - 2 + 2/rho2)}, for the
/// exactly integrated heat equation with piecewise-constant-in-time
/// forcing snapshots. Requires rho2 <= rho1.
double parabolic_regularity_ratio(const SpectralField& u0, const std::vector<SpectralField>& forcing,
                                  double t_end, double mu, double sigma, double rho1, double rho2,
                                  const LpPartition& part);

}  // namespace nslab
