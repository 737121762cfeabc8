#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nslab {

/// Smooth scalar function of density with its derivative (needed by the
/// pressure-gradient coefficients).
struct ScalarFn {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  double operator()(double x) const { return value(x); }
};

ScalarFn constant_fn(double c);
/// sum_k coeffs[k] x^k
ScalarFn polynomial_fn(std::vector<double> coeffs);
/// b x / (delta - x) (Van der Waals thermal pressure)
ScalarFn vdw_pressure_fn(double b, double delta);

/// Equation of state and transport coefficients around the equilibrium
/// (rho_inf, 0, T_inf). Pressure P(rho, T) = pi0(rho) + T pi1(rho).
struct PhysicalModel {
  ScalarFn pi0, pi1;
  ScalarFn mu, lam, kappa;
  double C_v = 1.0;
  double rho_inf = 1.0;
  double T_inf = 1.0;

  double mu_inf() const { return mu(rho_inf); }
  double lam_inf() const { return lam(rho_inf); }
  double kappa_inf() const { return kappa(rho_inf); }
  double pressure_density_slope(double rho) const { return pi0.deriv(rho) + T_inf * pi1.deriv(rho); }
};

/// Presets selectable by name from the CLI.
PhysicalModel ideal_gas_model(double R = 1.0, double C_v = 1.0, double rho_inf = 1.0, double T_inf = 1.0);
PhysicalModel vdw_model(double alpha = 0.1, double b = 1.0, double delta = 3.0, double C_v = 1.0,
                        double rho_inf = 1.0, double T_inf = 1.0);
/// Polynomial coefficient lists for pi0, pi1, mu, lam, kappa.
PhysicalModel custom_poly_model(std::vector<double> pi0, std::vector<double> pi1, std::vector<double> mu,
                                std::vector<double> lam, std::vector<double> kappa, double C_v = 1.0,
                                double rho_inf = 1.0, double T_inf = 1.0);

/// Rescaling constants of the nondimensionalized system.
struct DerivedConstants {
  double nu;            ///< lam_inf + 2 mu_inf
  double nu_inf;        ///< nu / rho_inf
  double chi0;          ///< (d P / d rho at equilibrium)^{-1/2}
  double beta;          ///< kappa_inf / (nu C_v)
  double gamma;         ///< (chi0/rho_inf) sqrt(T_inf/C_v) pi1(rho_inf)
  double mu_tilde;      ///< mu_inf / nu
  double lam_mu_tilde;  ///< (lam_inf + mu_inf) / nu
};

/// Evaluate the rescaling constants; rejects models violating positivity of
/// the viscosities, heat conduction, or the pressure slopes at equilibrium.
DerivedConstants derive_constants(const PhysicalModel& model);

/// Scalar coefficient functions of the rescaled density perturbation a
/// (domain a > -1). All vanish at a = 0 except Kt2.
struct CoefficientSet {
  std::function<double(double)> I;      ///< a / (1+a)
  std::function<double(double)> K1;     ///< pressure-slope ratio minus one
  std::function<double(double)> K2;     ///< thermal pressure deviation
  std::function<double(double)> K3;     ///< integrated thermal-pressure slope
  std::function<double(double)> Kt1;    ///< identical formula to K2 (aliased)
  std::function<double(double)> Kt2;    ///< pi1(rho_inf(1+a)) / (C_v rho_inf (1+a))
  std::function<double(double)> mu_t;   ///< mu(rho_inf(1+a)) - mu_inf
  std::function<double(double)> lam_t;  ///< lam(rho_inf(1+a)) - lam_inf
  std::function<double(double)> kap_t;  ///< kappa(rho_inf(1+a)) - kappa_inf
  /// mu(rho_inf(1+a)) / (1+a) and lam(rho_inf(1+a)) / (1+a): the viscous
  /// dissipation weights in the temperature source.
  std::function<double(double)> mu_over;
  std::function<double(double)> lam_over;
};

CoefficientSet make_coefficients(const PhysicalModel& model, const DerivedConstants& consts);

}  // namespace nslab
