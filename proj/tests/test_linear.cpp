#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nslab/linear.hpp"
#include "nslab/lp.hpp"
#include "test_util.hpp"

using namespace nslab;
using testutil::random_field;
using testutil::random_vector_field;

namespace {

State random_state(const Grid& g, std::mt19937_64& rng, double cutoff) {
  State s(g);
  s.a = random_field(g, rng, cutoff);
  s.v = random_vector_field(g, rng, cutoff);
  s.theta = random_field(g, rng, cutoff);
  return s;
}

}  // namespace

TEST_CASE("derived constants for the ideal-gas preset") {
  const PhysicalModel m = ideal_gas_model();
  const DerivedConstants c = derive_constants(m);
  CHECK(c.nu == doctest::Approx(2.0));
  CHECK(c.nu_inf == doctest::Approx(2.0));
  CHECK(c.chi0 == doctest::Approx(1.0));
  CHECK(c.beta == doctest::Approx(0.5));
  CHECK(c.gamma == doctest::Approx(1.0));
  CHECK(c.mu_tilde == doctest::Approx(0.5));
  CHECK(c.lam_mu_tilde == doctest::Approx(0.5));
}

TEST_CASE("model gates") {
  SUBCASE("barotropic pressure rejected") {
    PhysicalModel m = ideal_gas_model();
    m.pi1 = constant_fn(0.0);
    CHECK_THROWS_AS(derive_constants(m), std::invalid_argument);
  }
  SUBCASE("Van der Waals preset with a stable equilibrium accepted") {
    const PhysicalModel m = vdw_model(0.1, 1.0, 3.0);
    const DerivedConstants c = derive_constants(m);
    CHECK(c.chi0 > 0.0);
    CHECK(c.gamma > 0.0);
  }
  SUBCASE("unstable Van der Waals equilibrium rejected") {
    // large alpha makes dP/drho negative at rho_inf = 1
    CHECK_THROWS_AS(derive_constants(vdw_model(10.0, 1.0, 3.0)), std::invalid_argument);
  }
}

TEST_CASE("symbol assembly") {
  const DerivedConstants c = derive_constants(ideal_gas_model());

  SUBCASE("zero wavenumber freezes all modes") {
    const auto M = assemble_symbol({0.0, 0.0, 0.0}, 3, c);
    CHECK(M.norm() == 0.0);
  }

  SUBCASE("entries at xi = (1,0,0) for the ideal preset") {
    const auto M = assemble_symbol({1.0, 0.0, 0.0}, 3, c);
    // da/dt = -i v1
    CHECK(std::abs(M(0, 1) - cplx{0.0, -1.0}) < 1e-15);
    // dv1/dt: -(mu_tilde + lam_mu_tilde) v1 - i a - i gamma theta
    CHECK(std::abs(M(1, 1) - cplx{-1.0, 0.0}) < 1e-15);
    CHECK(std::abs(M(1, 0) - cplx{0.0, -1.0}) < 1e-15);
    CHECK(std::abs(M(1, 4) - cplx{0.0, -1.0}) < 1e-15);
    // transverse rows: pure heat with mu_tilde = 1/2
    CHECK(std::abs(M(2, 2) - cplx{-0.5, 0.0}) < 1e-15);
    CHECK(std::abs(M(3, 3) - cplx{-0.5, 0.0}) < 1e-15);
    // dtheta/dt = -beta theta - i gamma v1
    CHECK(std::abs(M(4, 4) - cplx{-0.5, 0.0}) < 1e-15);
    CHECK(std::abs(M(4, 1) - cplx{0.0, -1.0}) < 1e-15);
  }

  SUBCASE("transverse eigenvalue at |xi| = 2") {
    const auto M = assemble_symbol({0.0, 2.0, 0.0}, 3, c);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
    // -mu_tilde * 4 = -2 appears (twice) among the eigenvalues
    int hits = 0;
    for (int k = 0; k < 5; ++k)
      if (std::abs(es.eigenvalues()(k) - cplx{-2.0, 0.0}) < 1e-12) ++hits;
    CHECK(hits >= 2);
  }
}

TEST_CASE("radial reduction matches the full symbol spectrum") {
  const DerivedConstants c = derive_constants(ideal_gas_model());
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::array<double, 3> xi{u(rng), u(rng), u(rng)};
    const double rho = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    const auto M = assemble_symbol(xi, 3, c);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> full(M, false);
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> red(radial_symbol(rho, c), false);
    std::vector<cplx> expected;
    for (int k = 0; k < 3; ++k) expected.push_back(red.eigenvalues()(k));
    expected.push_back(cplx{transverse_rate(rho, c), 0.0});
    expected.push_back(cplx{transverse_rate(rho, c), 0.0});
    // match as multisets
    std::vector<cplx> got;
    for (int k = 0; k < 5; ++k) got.push_back(full.eigenvalues()(k));
    for (const cplx& e : expected) {
      double best = 1e300;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < got.size(); ++i)
        if (std::abs(got[i] - e) < best) {
          best = std::abs(got[i] - e);
          arg = i;
        }
      CHECK(best <= 1e-12 * (1.0 + std::abs(e)));
      got.erase(got.begin() + static_cast<long>(arg));
    }
  }
}

TEST_CASE("spectral stability for valid models") {
  const Grid g = make_grid(3, 16, 4.0 * std::numbers::pi);
  for (const auto& model : {ideal_gas_model(), vdw_model(0.1, 1.0, 3.0),
                            custom_poly_model({0.0, 0.2}, {0.0, 1.0}, {0.8, 0.1}, {0.1}, {1.0, 0.2})}) {
    const DerivedConstants c = derive_constants(model);
    CHECK(max_spectral_abscissa(g, c) <= 1e-12);
  }
  // strict negativity away from zero: check a sweep
  const DerivedConstants c = derive_constants(ideal_gas_model());
  for (double rho : {0.05, 0.3, 1.0, 2.0, 10.0}) {
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(radial_symbol(rho, c), false);
    for (int k = 0; k < 3; ++k) CHECK(es.eigenvalues()(k).real() < 0.0);
  }
}

TEST_CASE("matrix exponential routes") {
  SUBCASE("agrees with the series on a random matrix") {
    std::mt19937_64 rng(89);
    std::normal_distribution<double> gauss(0.0, 0.4);
    Eigen::MatrixXcd A(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int col = 0; col < 4; ++col) A(r, col) = cplx{gauss(rng), gauss(rng)};
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Identity(4, 4);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(4, 4);
    for (int k = 1; k < 40; ++k) {
      term = (term * A / static_cast<double>(k)).eval();
      S += term;
    }
    CHECK((expm(A) - S).norm() <= 1e-12 * S.norm());
  }

  SUBCASE("defective matrix falls back cleanly") {
    Eigen::MatrixXcd J(2, 2);  // Jordan block: eigendecomposition unusable
    J << cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0};
    const auto E = expm(J);
    CHECK(std::abs(E(0, 0) - cplx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(E(0, 1) - cplx{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(E(1, 1) - cplx{1.0, 0.0}) < 1e-14);
  }

  SUBCASE("phi functions at zero and against scalar formulas") {
    Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(3, 3), E, P1, P2;
    expm_phi12(Z, E, P1, P2);
    CHECK((E - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-14);
    CHECK((P1 - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-14);
    CHECK((P2 - 0.5 * Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-14);

    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2, 2);
    D(0, 0) = cplx{-1.3, 0.7};
    D(1, 1) = cplx{-0.2, -2.0};
    expm_phi12(D, E, P1, P2);
    for (int k = 0; k < 2; ++k) {
      const cplx z = D(k, k);
      CHECK(std::abs(E(k, k) - std::exp(z)) < 1e-13);
      CHECK(std::abs(P1(k, k) - (std::exp(z) - 1.0) / z) < 1e-13);
      CHECK(std::abs(P2(k, k) - (std::exp(z) - 1.0 - z) / (z * z)) < 1e-13);
    }
  }
}

TEST_CASE("semigroup on grid states") {
  const Grid g = make_grid(3, 16, 4.0 * std::numbers::pi);
  const DerivedConstants c = derive_constants(ideal_gas_model());
  std::mt19937_64 rng(97);
  const State u0 = random_state(g, rng, 4.0);

  SUBCASE("t = 0 is the identity") {
    const State u = semigroup_apply(u0, 0.0, c);
    CHECK(l2_norm(u - u0) == 0.0);
  }

  SUBCASE("negative time rejected") {
    CHECK_THROWS_AS(semigroup_apply(u0, -1.0, c), std::invalid_argument);
  }

  SUBCASE("pure transverse mode decays at the heat rate") {
    State u(g);
    u.v.comp[0] = testutil::single_mode(g, {0, 0, 2}, cplx{1.0, 0.0});  // |xi| = 1, x-polarized
    const State ut = semigroup_apply(u, 0.7, c);
    const double expect = std::exp(-c.mu_tilde * 1.0 * 0.7);
    CHECK(l2_norm_spectral(ut.v) == doctest::Approx(expect * l2_norm_spectral(u.v)).epsilon(1e-12));
    CHECK(l2_norm_spectral(ut.a) < 1e-14);
    CHECK(l2_norm_spectral(ut.theta) < 1e-14);
  }

  SUBCASE("semigroup property") {
    const State one = semigroup_apply(semigroup_apply(u0, 1.0, c), 1.0, c);
    const State two = semigroup_apply(u0, 2.0, c);
    CHECK(l2_norm(one - two) <= 1e-10 * l2_norm(two));
  }

  SUBCASE("agrees with the full-matrix exponential route") {
    const double t = 0.9;
    const State fast = semigroup_apply(u0, t, c);
    // direct per-mode (d+2)x(d+2) exponential
    State slow(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto xi = g.xi(i);
      const auto M = assemble_symbol(xi, 3, c);
      const Eigen::MatrixXcd E = expm((t * M).eval());
      Eigen::VectorXcd in(5);
      in(0) = u0.a.coeffs()[i];
      for (int a = 0; a < 3; ++a) in(1 + a) = u0.v.comp[static_cast<std::size_t>(a)].coeffs()[i];
      in(4) = u0.theta.coeffs()[i];
      const Eigen::VectorXcd out = E * in;
      slow.a.coeffs()[i] = out(0);
      for (int a = 0; a < 3; ++a) slow.v.comp[static_cast<std::size_t>(a)].coeffs()[i] = out(1 + a);
      slow.theta.coeffs()[i] = out(4);
    }
    CHECK(l2_norm(fast - slow) <= 1e-11 * l2_norm(slow));
  }

  SUBCASE("backward exponential recovers the initial state") {
    const double t = 1.3;
    const State fwd = semigroup_apply(u0, t, c);
    State back(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto M = assemble_symbol(g.xi(i), 3, c);
      const Eigen::MatrixXcd E = expm((-t * M).eval());
      Eigen::VectorXcd in(5);
      in(0) = fwd.a.coeffs()[i];
      for (int a = 0; a < 3; ++a) in(1 + a) = fwd.v.comp[static_cast<std::size_t>(a)].coeffs()[i];
      in(4) = fwd.theta.coeffs()[i];
      const Eigen::VectorXcd out = E * in;
      back.a.coeffs()[i] = out(0);
      for (int a = 0; a < 3; ++a) back.v.comp[static_cast<std::size_t>(a)].coeffs()[i] = out(1 + a);
      back.theta.coeffs()[i] = out(4);
    }
    CHECK(l2_norm(back - u0) <= 1e-10 * l2_norm(u0));
  }
}

TEST_CASE("low-frequency decay bound fit") {
  const DerivedConstants c = derive_constants(ideal_gas_model());

  SUBCASE("heat specialization: scalar branch rate is beta") {
    DerivedConstants heat = c;
    heat.gamma = 0.0;
    for (int j : {-3, 0}) {
      const double rho = std::ldexp(1.0, j);
      for (double t : {0.5, 2.0, 8.0}) {
        const Eigen::Matrix3cd E = expm((t * radial_symbol(rho, heat)).eval()).eval();
        // theta decouples: entry (2,2) is exactly e^{-beta rho^2 t}
        CHECK(std::abs(E(2, 2) - std::exp(-heat.beta * rho * rho * t)) < 1e-12);
        const double fitted_c = -std::log(std::abs(E(2, 2))) / (std::ldexp(1.0, 2 * j) * t);
        CHECK(fitted_c == doctest::Approx(heat.beta).epsilon(1e-10));
      }
    }
  }

  SUBCASE("ideal gas: positive uniform rate with moderate constant") {
    const DecayBoundFit fit = fit_semigroup_decay_bound(-6, 0, 0, c);
    CHECK(fit.c0 > 0.0);
    CHECK(fit.C <= 10.0 + 1e-9);
    // uniform over low blocks: constants comparable at the two ends
    const double c_low = fit.per_j_C.at(-4);
    const double c_high = fit.per_j_C.at(0);
    CHECK(c_low <= 10.0);
    CHECK(c_high <= 10.0);
  }

  SUBCASE("blocks above j0 rejected") {
    CHECK_THROWS_AS(fit_semigroup_decay_bound(-2, 1, 0, c), std::invalid_argument);
  }
}
