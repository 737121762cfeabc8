#include "nslab/model.hpp"

#include <cmath>
#include <stdexcept>

#include "quad_util.hpp"

namespace nslab {

namespace {

// one GL panel on [0, 1]; enough for the smooth, short integration paths
// that K3 sees (|a| < 1)
double integrate01(const std::function<double(double)>& f) { return quad::integrate(f, 0.0, 1.0); }

}  // namespace

ScalarFn constant_fn(double c) {
  return ScalarFn{[c](double) { return c; }, [](double) { return 0.0; }};
}

ScalarFn polynomial_fn(std::vector<double> coeffs) {
  auto value = [coeffs](double x) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
    return acc;
  };
  auto deriv = [coeffs](double x) {
    double acc = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * x + coeffs[k] * static_cast<double>(k);
    return acc;
  };
  return ScalarFn{std::move(value), std::move(deriv)};
}

ScalarFn vdw_pressure_fn(double b, double delta) {
  auto value = [b, delta](double x) { return b * x / (delta - x); };
  auto deriv = [b, delta](double x) {
    const double dd = delta - x;
    return b * delta / (dd * dd);
  };
  return ScalarFn{std::move(value), std::move(deriv)};
}

PhysicalModel ideal_gas_model(double R, double C_v, double rho_inf, double T_inf) {
  PhysicalModel m;
  m.pi0 = constant_fn(0.0);
  m.pi1 = polynomial_fn({0.0, R});
  m.mu = constant_fn(1.0);
  m.lam = constant_fn(0.0);
  m.kappa = constant_fn(1.0);
  m.C_v = C_v;
  m.rho_inf = rho_inf;
  m.T_inf = T_inf;
  return m;
}

PhysicalModel vdw_model(double alpha, double b, double delta, double C_v, double rho_inf, double T_inf) {
  PhysicalModel m;
  m.pi0 = polynomial_fn({0.0, 0.0, -alpha});
  m.pi1 = vdw_pressure_fn(b, delta);
  m.mu = constant_fn(1.0);
  m.lam = constant_fn(0.0);
  m.kappa = constant_fn(1.0);
  m.C_v = C_v;
  m.rho_inf = rho_inf;
  m.T_inf = T_inf;
  return m;
}

PhysicalModel custom_poly_model(std::vector<double> pi0, std::vector<double> pi1, std::vector<double> mu,
                                std::vector<double> lam, std::vector<double> kappa, double C_v,
                                double rho_inf, double T_inf) {
  PhysicalModel m;
  m.pi0 = polynomial_fn(std::move(pi0));
  m.pi1 = polynomial_fn(std::move(pi1));
  m.mu = polynomial_fn(std::move(mu));
  m.lam = polynomial_fn(std::move(lam));
  m.kappa = polynomial_fn(std::move(kappa));
  m.C_v = C_v;
  m.rho_inf = rho_inf;
  m.T_inf = T_inf;
  return m;
}

DerivedConstants derive_constants(const PhysicalModel& model) {
  if (!(model.rho_inf > 0.0) || !(model.T_inf > 0.0))
    throw std::invalid_argument("derive_constants: equilibrium density and temperature must be positive");
  if (!(model.C_v > 0.0)) throw std::invalid_argument("derive_constants: require C_v > 0");
  const double mu_inf = model.mu_inf();
  const double lam_inf = model.lam_inf();
  if (!(mu_inf > 0.0)) throw std::invalid_argument("derive_constants: require mu > 0 at equilibrium");
  const double nu = lam_inf + 2.0 * mu_inf;
  if (!(nu > 0.0)) throw std::invalid_argument("derive_constants: require lam + 2 mu > 0 at equilibrium");
  if (!(model.kappa_inf() > 0.0))
    throw std::invalid_argument("derive_constants: require kappa > 0 at equilibrium");
  const double dp = model.pressure_density_slope(model.rho_inf);
  if (!(dp > 0.0))
    throw std::invalid_argument("derive_constants: linear stability requires dP/drho > 0 at equilibrium");
  const double pi1_inf = model.pi1(model.rho_inf);
  if (!(pi1_inf > 0.0))
    throw std::invalid_argument("derive_constants: linear stability requires dP/dT > 0 at equilibrium");

  DerivedConstants c{};
  c.nu = nu;
  c.nu_inf = nu / model.rho_inf;
  c.chi0 = 1.0 / std::sqrt(dp);
  c.beta = model.kappa_inf() / (nu * model.C_v);
  c.gamma = (c.chi0 / model.rho_inf) * std::sqrt(model.T_inf / model.C_v) * pi1_inf;
  c.mu_tilde = mu_inf / nu;
  c.lam_mu_tilde = (lam_inf + mu_inf) / nu;
  return c;
}

CoefficientSet make_coefficients(const PhysicalModel& model, const DerivedConstants& consts) {
  const double rho_inf = model.rho_inf;
  const double T_inf = model.T_inf;
  const double C_v = model.C_v;
  const double chi0 = consts.chi0;
  const double dp_eq = model.pressure_density_slope(rho_inf);
  const double mu_inf = model.mu_inf();
  const double lam_inf = model.lam_inf();
  const double kap_inf = model.kappa_inf();
  const double therm = std::sqrt(T_inf / C_v);
  const ScalarFn pi1 = model.pi1;
  const ScalarFn pi0 = model.pi0;
  const ScalarFn mu = model.mu;
  const ScalarFn lam = model.lam;
  const ScalarFn kap = model.kappa;

  CoefficientSet cs;
  cs.I = [](double a) { return a / (1.0 + a); };
  cs.K1 = [=](double a) {
    const double rho = rho_inf * (1.0 + a);
    const double dp = pi0.deriv(rho) + T_inf * pi1.deriv(rho);
    return dp / ((1.0 + a) * dp_eq) - 1.0;
  };
  auto thermal_dev = [=](double a) {
    return (chi0 / rho_inf) * therm * (pi1(rho_inf * (1.0 + a)) / (1.0 + a) - pi1(rho_inf));
  };
  cs.K2 = thermal_dev;
  cs.Kt1 = thermal_dev;  // identical closed form; kept as one implementation
  cs.K3 = [=](double a) {
    if (a == 0.0) return 0.0;
    const double integral = a * integrate01([&](double u) {
                              const double z = a * u;
                              return pi1.deriv(rho_inf * (1.0 + z)) / (1.0 + z);
                            });
    return chi0 * therm * integral;
  };
  cs.Kt2 = [=](double a) { return pi1(rho_inf * (1.0 + a)) / (C_v * rho_inf * (1.0 + a)); };
  cs.mu_t = [=](double a) { return mu(rho_inf * (1.0 + a)) - mu_inf; };
  cs.lam_t = [=](double a) { return lam(rho_inf * (1.0 + a)) - lam_inf; };
  cs.kap_t = [=](double a) { return kap(rho_inf * (1.0 + a)) - kap_inf; };
  cs.mu_over = [=](double a) { return mu(rho_inf * (1.0 + a)) / (1.0 + a); };
  cs.lam_over = [=](double a) { return lam(rho_inf * (1.0 + a)) / (1.0 + a); };
  return cs;
}

}  // namespace nslab
