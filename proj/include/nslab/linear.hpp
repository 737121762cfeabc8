#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "nslab/model.hpp"
#include "nslab/state.hpp"

namespace nslab {

/// Full (d+2)x(d+2) symbol of the linearized system at wavenumber xi,
/// unknown ordering (a, v_1..v_d, theta):
///   da/dt     = -i xi . v
///   dv/dt     = -(mu_tilde |xi|^2 Id + lam_mu_tilde xi xi^T) v - i xi a - i gamma xi theta
///   dtheta/dt = -beta |xi|^2 theta - i gamma xi . v
Eigen::MatrixXcd assemble_symbol(const std::array<double, 3>& xi, int dim, const DerivedConstants& c);

/// Radial reduction to the compressible variables (a, xihat.v, theta); the
/// d-1 transverse velocity polarizations decouple with rate
/// -mu_tilde rho^2.
Eigen::Matrix3cd radial_symbol(double rho, const DerivedConstants& c);
double transverse_rate(double rho, const DerivedConstants& c);

/// Matrix exponential: eigendecomposition when the eigenvector basis is
/// well conditioned, scaling-and-squaring Pade otherwise (the symbol has
/// branch collisions near the acoustic/diffusive transition).
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& A);

/// e^A together with phi1(A) = (e^A - 1)/A and phi2(A) = (e^A - 1 - A)/A^2,
/// evaluated through one augmented-block exponential (robust at A = 0 and
/// at eigenvalue collisions).
void expm_phi12(const Eigen::MatrixXcd& A, Eigen::MatrixXcd& E, Eigen::MatrixXcd& P1, Eigen::MatrixXcd& P2);

/// Per-mode evolution matrices for one time increment, cached by the exact
/// integer radius |m|^2. E is always filled; phi1/phi2 only when
/// `with_phis` is set.
struct SemigroupTable {
  double dt = 0.0;
  bool with_phis = false;
  std::map<long long, Eigen::Matrix3cd> E, P1, P2;
  std::map<long long, double> Et, P1t, P2t;  // transverse (scalar) branch
};

SemigroupTable build_semigroup_table(const Grid& g, double dt, const DerivedConstants& c, bool with_phis);

/// Exact linear evolution U(t) = E(t) U0, per mode. Rejects t < 0.
State semigroup_apply(const State& u0, double t, const DerivedConstants& c);

/// Apply one cached table: out = E u (mode-wise); when `table.with_phis`,
/// the phi matrices act on a forcing state instead via apply_phi.
State apply_semigroup_table(const SemigroupTable& table, const State& u);
State apply_phi1(const SemigroupTable& table, const State& u);
State apply_phi2(const SemigroupTable& table, const State& u);

/// max over grid modes of the spectral abscissa of the symbol.
double max_spectral_abscissa(const Grid& g, const DerivedConstants& c);

struct EigenSweepRow {
  double rho;
  std::vector<double> re;  // real parts, compressible branch then transverse
  std::vector<double> im;
};
std::vector<EigenSweepRow> symbol_eigen_sweep(const std::vector<double>& rhos, int dim,
                                              const DerivedConstants& c);

/// Fit of the low-frequency block decay bound: largest rate c0 such that
///   ||E(t)|xi in 2^j annulus|| <= C_cap * e^{-c0 4^j t}
/// holds over sampled times and radii for every block j in [j_lo, j_hi].
struct DecayBoundFit {
  double c0 = 0.0;
  double C = 0.0;                 ///< uniform ratio constant realized at c0
  std::map<int, double> per_j_C;  ///< per-block constants at c0
};

DecayBoundFit fit_semigroup_decay_bound(int j_lo, int j_hi, int j0, const DerivedConstants& c,
                                        double C_cap = 10.0, int rho_samples = 12, int t_samples = 48);

/// Operator norm of the per-mode evolution (largest singular value across
/// the compressible block and the transverse branch).
double evolution_operator_norm(double rho, double t, int dim, const DerivedConstants& c);

}  // namespace nslab
