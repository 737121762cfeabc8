#pragma once

#include <functional>
#include <vector>

#include "nslab/fitting.hpp"
#include "nslab/lp.hpp"
#include "nslab/model.hpp"

namespace nslab::radial {

/// Isotropic spectral data for the linear solver: one radial amplitude
/// envelope shared by the unknowns, split across the compressible
/// variables (a, xihat.v, theta) and the transverse velocity with fixed
/// weights (squares summing to 1 keeps |U0| = amp).
struct RadialProfile {
  std::function<double(double)> amp;
  double w_a = 0.5;
  double w_vpar = 0.5;
  double w_theta = 0.5;
  double w_vperp = 0.5;
};

/// Envelope rho^{s1 - d/2} below the cutoff 2^{j0}: the block norms of the
/// data are then proportional to 2^{j s1}.
RadialProfile power_law_profile(double s1, int dim, double cutoff);
RadialProfile gaussian_profile(double width = 1.0);

struct BlockNorms {
  double a = 0.0, v = 0.0, theta = 0.0;
  double tuple() const { return a + v + theta; }
};

struct QuadOptions {
  int panels = 6;  ///< log-spaced Gauss panels per block annulus
};

/// ||Delta_j E(t) U0||_{L^2} per unknown, by 1-D quadrature of the reduced
/// symbol over the block annulus [2^{j-1}, 2^{j+2}] (covers supp phi_j).
/// Unconstrained by any grid: blocks may sit far below anything a torus
/// could resolve.
BlockNorms evolved_block_norms(double t, int j, const RadialProfile& prof, int dim,
                               const DerivedConstants& c, const QuadOptions& opt = {});

/// sum over j in [j_min, j0] of 2^{js} (||a_j|| + ||v_j|| + ||theta_j||)
double evolved_low_besov(double t, double s, int j_min, int j0, const RadialProfile& prof, int dim,
                         const DerivedConstants& c, const QuadOptions& opt = {});

/// ||Lambda^s u(t)||_{L^r} of one unknown under the linear flow; r = 2 by
/// Parseval quadrature, other r (dim = 3 only) through the spherical
/// synthesis of the radial spectrum.
enum class Unknown { density, velocity, temperature };
double evolved_lambda_lr(double t, double s, double r, Unknown which, const RadialProfile& prof, int dim,
                         const DerivedConstants& c);

struct LinearDecayRun {
  std::vector<double> times;
  std::vector<int> blocks;
  // block_norms[it][jb]: tuple norm of block blocks[jb] at times[it]
  std::vector<std::vector<double>> block_norms;
  std::vector<double> low_norm;       ///< Besov(s;2,1) low norm per time
  std::vector<double> weighted_norm;  ///< <t>^{(s1+s)/2} low norm
  RateFit fit;                        ///< fitted exponent of low_norm
  double target = 0.0;                ///< -(s1+s)/2
};

LinearDecayRun run_linear_decay(double s1, double s, int j_min, int j0, int dim, const DerivedConstants& c,
                                const std::vector<double>& t_grid, double fit_window = 0.5,
                                const QuadOptions& opt = {});

/// Pure heat flow from radial data: fits the L^p decay exponent; the
/// comparison target for L^q data is -(d/2)(1/q - 1/p).
struct HeatRateResult {
  RateFit fit;
  double target;
};
HeatRateResult heat_kernel_rate(const RadialProfile& prof, double p, double q, int dim,
                                const std::vector<double>& t_grid, double fit_window = 0.5);
double heat_lp_norm(double t, double p, const RadialProfile& prof, int dim);

}  // namespace nslab::radial
