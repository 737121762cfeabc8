#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nslab/integrator.hpp"
#include "nslab/nonlinear.hpp"
#include "test_util.hpp"

using namespace nslab;
using testutil::convolve_sparse;
using testutil::random_field;
using testutil::random_vector_field;
using testutil::single_mode;
using testutil::sparse_spectrum;

namespace {

State random_state(const Grid& g, std::mt19937_64& rng, double cutoff, double amp) {
  State s(g);
  s.a = amp * random_field(g, rng, cutoff);
  s.a.coeffs()[0] = cplx{0.0, 0.0};
  hermitize(s.a);
  s.v = amp * random_vector_field(g, rng, cutoff);
  s.theta = amp * random_field(g, rng, cutoff);
  return s;
}

PhysicalModel density_dependent_model() {
  // density-dependent viscosities and conduction to exercise every
  // coefficient path
  return custom_poly_model({0.0, 0.1, 0.05}, {0.0, 1.0, 0.2}, {0.7, 0.3}, {0.05, 0.1}, {0.9, 0.25});
}

}  // namespace

TEST_CASE("coefficient functions vanish at the origin") {
  for (const auto& model : {ideal_gas_model(), vdw_model(0.1, 1.0, 3.0), density_dependent_model()}) {
    const DerivedConstants c = derive_constants(model);
    const CoefficientSet cs = make_coefficients(model, c);
    CHECK(std::abs(cs.I(0.0)) <= 1e-14);
    CHECK(std::abs(cs.K1(0.0)) <= 1e-14);
    CHECK(std::abs(cs.K2(0.0)) <= 1e-14);
    CHECK(std::abs(cs.K3(0.0)) <= 1e-14);
    CHECK(std::abs(cs.Kt1(0.0)) <= 1e-14);
    CHECK(std::abs(cs.mu_t(0.0)) <= 1e-14);
    CHECK(std::abs(cs.lam_t(0.0)) <= 1e-14);
    CHECK(std::abs(cs.kap_t(0.0)) <= 1e-14);
  }
  // Kt2 does not vanish: it equals pi1(rho_inf)/(C_v rho_inf) at the origin
  const PhysicalModel ideal = ideal_gas_model();
  const CoefficientSet cs = make_coefficients(ideal, derive_constants(ideal));
  CHECK(cs.Kt2(0.0) == doctest::Approx(1.0));
}

TEST_CASE("ideal-gas K3 has the closed log form") {
  const PhysicalModel m = ideal_gas_model();
  const CoefficientSet cs = make_coefficients(m, derive_constants(m));
  for (double a : {-0.3, -0.05, 0.2, 0.7}) {
    CHECK(cs.K3(a) == doctest::Approx(std::log1p(a)).epsilon(1e-12));
  }
}

TEST_CASE("mass flux term") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);

  SUBCASE("vanishes when either factor vanishes") {
    std::mt19937_64 r1(1), r2(2);
    State s(g);
    s.v = random_vector_field(g, r1, 5.0);
    CHECK(l2_norm_spectral(compute_f(s)) == 0.0);  // a = 0
    State s2(g);
    s2.a = 0.01 * random_field(g, r2, 5.0);
    CHECK(l2_norm_spectral(compute_f(s2)) == 0.0);  // v = 0
  }

  SUBCASE("two-mode convolution oracle") {
    State s(g);
    s.a = single_mode(g, {2, 1, 0}, cplx{0.01, 0.02});
    s.v.comp[0] = single_mode(g, {1, -3, 2}, cplx{0.05, -0.01});
    const SpectralField f = compute_f(s);

    const auto prod = convolve_sparse(sparse_spectrum(s.a), sparse_spectrum(s.v.comp[0]));
    SpectralField expect(g);
    const double unit = g.fundamental();
    for (const auto& [m, coeff] : prod) {
      std::array<int, 3> idx{};
      for (int ax = 0; ax < 3; ++ax) {
        const int mm = m[static_cast<std::size_t>(ax)];
        idx[static_cast<std::size_t>(ax)] = mm >= 0 ? mm : mm + g.n();
      }
      expect.coeffs()[g.flatten(idx)] = -cplx{0.0, unit * m[0]} * coeff;
    }
    CHECK(l2_norm_spectral(f - expect) <= 1e-12 * l2_norm_spectral(expect));
    CHECK(std::abs(f.mean()) == 0.0);
  }
}

TEST_CASE("momentum nonlinearity limits") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  const PhysicalModel ideal = ideal_gas_model();
  const DerivedConstants c = derive_constants(ideal);
  std::mt19937_64 rng(101);

  SUBCASE("a = theta = 0 leaves only the self-advection") {
    State s(g);
    s.v = 0.1 * random_vector_field(g, rng, 5.0);
    const VectorField gv = compute_g(s, ideal, c);
    for (int j = 0; j < 3; ++j) {
      SpectralField expect(g);
      for (int i = 0; i < 3; ++i) {
        const VectorField dj = grad(s.v.comp[static_cast<std::size_t>(j)]);
        expect = expect - dealiased_product(s.v.comp[static_cast<std::size_t>(i)], dj.comp[static_cast<std::size_t>(i)]);
      }
      CHECK(l2_norm_spectral(gv.comp[static_cast<std::size_t>(j)] - expect) <=
            1e-12 * (l2_norm_spectral(expect) + 1e-30));
    }
  }

  SUBCASE("constant transport coefficients kill the viscous correction") {
    // ideal preset: mu, lam constant, so the flux tensor is identically zero;
    // adding density variation must not change the viscous piece
    std::mt19937_64 r2(103);
    State s = random_state(g, r2, 5.0, 0.02);
    const CoefficientSet cs = make_coefficients(ideal, c);
    for (double a : {-0.2, 0.0, 0.4}) {
      CHECK(cs.mu_t(a) == 0.0);
      CHECK(cs.lam_t(a) == 0.0);
    }
    // cross-route agreement is then immediate even without the flux form
    const VectorField g1 = compute_g(s, ideal, c);
    const VectorField g2 = assemble_g_expanded(s, ideal, c);
    double num = 0.0;
    for (int j = 0; j < 3; ++j) num += l2_norm_spectral(g1.comp[static_cast<std::size_t>(j)] - g2.comp[static_cast<std::size_t>(j)]);
    CHECK(num <= 1e-12 * (l2_norm_spectral(g1) + 1e-30));
  }
}

TEST_CASE("dual assembly of g and k") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  const PhysicalModel model = density_dependent_model();
  const DerivedConstants c = derive_constants(model);
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 5; ++trial) {
    const State s = random_state(g, rng, 6.0, 0.03);
    const NonlinearTerms t = compute_fgk(s, model, c);
    const VectorField ge = assemble_g_expanded(s, model, c);
    const SpectralField ke = assemble_k_expanded(s, model, c);
    const double gscale = l2_norm_spectral(t.g) + 1e-30;
    CHECK(l2_norm_spectral(t.g - ge) <= 1e-12 * gscale);
    const double kscale = l2_norm_spectral(t.k) + 1e-30;
    CHECK(l2_norm_spectral(t.k - ke) <= 1e-12 * kscale);
  }
}

TEST_CASE("temperature source limits") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  const PhysicalModel model = density_dependent_model();
  const DerivedConstants c = derive_constants(model);
  const CoefficientSet cs = make_coefficients(model, c);
  std::mt19937_64 rng(109);

  SUBCASE("v = 0 leaves conduction only") {
    State s(g);
    s.a = 0.05 * random_field(g, rng, 5.0);
    s.theta = 0.05 * random_field(g, rng, 5.0);
    const SpectralField k = compute_k(s, model, c);
    // direct flux-form evaluation
    const SpectralField kap_ta = compose(s.a, cs.kap_t);
    const SpectralField inva = compose(s.a, [&](double a) { return 1.0 / (c.nu * (1.0 + a)); });
    VectorField flux(g);
    const VectorField gth = grad(s.theta);
    for (int i = 0; i < 3; ++i) flux.comp[static_cast<std::size_t>(i)] = dealiased_product(kap_ta, gth.comp[static_cast<std::size_t>(i)]);
    SpectralField expect = dealiased_product(inva, div(flux));
    // plus the reference-conduction commutator -beta I(a) lap theta
    expect = expect - c.beta * dealiased_product(compose(s.a, cs.I), laplacian(s.theta));
    CHECK(l2_norm_spectral(k - expect) <= 1e-12 * (l2_norm_spectral(expect) + 1e-30));
  }

  SUBCASE("single shear mode dissipation matches the hand contraction") {
    // v = (cos(x2), 0, 0): dv_21 = -sin, D12 = D21 = -sin/2
    const PhysicalModel ideal = ideal_gas_model();
    const DerivedConstants ci = derive_constants(ideal);
    State s(g);
    s.v.comp[0] = single_mode(g, {0, 1, 0}, cplx{0.5, 0.0});  // cos(x2)
    const SpectralField k = compute_k(s, ideal, ci);
    // 2 mu D:D with D:D = 2 * (sin^2)/4 = (1 - cos(2 x2))/4; weight
    // 1/(nu chi0) sqrt(1/(T C_v)) = 1/2
    SpectralField expect = single_mode(g, {0, 2, 0}, cplx{-0.125, 0.0});
    expect.coeffs()[0] = cplx{0.25, 0.0};
    expect = 0.5 * (2.0 * 1.0) * expect;
    CHECK(l2_norm_spectral(k - expect) <= 1e-12 * l2_norm_spectral(expect));
  }
}

TEST_CASE("small-amplitude quadratic scaling of the sources") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  const PhysicalModel model = density_dependent_model();
  const DerivedConstants c = derive_constants(model);
  std::mt19937_64 rng(113);
  const State base = random_state(g, rng, 5.0, 1.0);

  auto total = [&](double eps) {
    State s(g);
    s.a = eps * base.a;
    s.v = eps * base.v;
    s.theta = eps * base.theta;
    const NonlinearTerms t = compute_fgk(s, model, c);
    return l2_norm_spectral(t.f) + l2_norm_spectral(t.g) + l2_norm_spectral(t.k);
  };
  const double n1 = total(2e-3);
  const double n2 = total(1e-3);
  CHECK(n1 / n2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("effective velocity") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(127);

  SUBCASE("a = div v gives w = 0") {
    State s(g);
    s.v = random_vector_field(g, rng, 5.0);
    s.a = div(s.v);
    const VectorField w = effective_velocity(s);
    CHECK(l2_norm_spectral(w) <= 1e-13 * l2_norm_spectral(s.v));
  }

  SUBCASE("divergence identity and curl-freeness on random states") {
    for (int trial = 0; trial < 5; ++trial) {
      State s = random_state(g, rng, 6.0, 1.0);
      const VectorField w = effective_velocity(s);
      const SpectralField resid = div(w) + (s.a - div(s.v));
      CHECK(l2_norm_spectral(resid) <= 1e-12 * (l2_norm_spectral(s.a) + l2_norm_spectral(s.v)));
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
          const SpectralField curl_ij = grad(w.comp[static_cast<std::size_t>(j)]).comp[static_cast<std::size_t>(i)] -
                                        grad(w.comp[static_cast<std::size_t>(i)]).comp[static_cast<std::size_t>(j)];
          CHECK(l2_norm_spectral(curl_ij) <= 1e-12 * (l2_norm_spectral(w) + 1e-30));
        }
    }
  }

  SUBCASE("nonzero mean rejected") {
    State s(g);
    s.a.coeffs()[0] = cplx{0.5, 0.0};
    CHECK_THROWS_AS(effective_velocity(s), std::invalid_argument);
  }
}

TEST_CASE("rescaling map") {
  const PhysicalModel model = ideal_gas_model(2.0, 1.5, 1.2, 0.9);  // nontrivial constants
  const Grid g = make_grid(3, 16, 10.0);
  std::mt19937_64 rng(131);

  SUBCASE("zero maps to zero") {
    const State s = rescale_from_physical(SpectralField(g), VectorField(g), SpectralField(g), model);
    CHECK(l2_norm(s) == 0.0);
  }

  SUBCASE("pure velocity with chi0 = 1") {
    const PhysicalModel unit = ideal_gas_model();  // chi0 = 1
    const VectorField u = random_vector_field(g, rng, 3.0);
    const State s = rescale_from_physical(SpectralField(g), u, SpectralField(g), unit);
    double diff = 0.0;
    for (int j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < g.size(); ++i)
        diff = std::max(diff, std::abs(s.v.comp[static_cast<std::size_t>(j)].coeffs()[i] -
                                       u.comp[static_cast<std::size_t>(j)].coeffs()[i]));
    CHECK(diff == 0.0);
  }

  SUBCASE("round trip") {
    const SpectralField b = 0.1 * random_field(g, rng, 3.0);
    const VectorField u = random_vector_field(g, rng, 3.0);
    const SpectralField E = random_field(g, rng, 3.0);
    const State s = rescale_from_physical(b, u, E, model);
    SpectralField b2;
    VectorField u2;
    SpectralField E2;
    physical_from_rescaled(s, model, b2, u2, E2);
    CHECK(b2.grid().length() == doctest::Approx(g.length()).epsilon(1e-14));
    CHECK(l2_norm_spectral(b2 - b) <= 1e-12 * l2_norm_spectral(b));
    CHECK(l2_norm_spectral(E2 - E) <= 1e-12 * l2_norm_spectral(E));
  }

  SUBCASE("density positivity enforced") {
    std::vector<double> vals(g.size(), -1.5);
    const SpectralField bad = from_physical(g, vals);
    CHECK_THROWS_AS(rescale_from_physical(bad, VectorField(g), SpectralField(g), model),
                    std::invalid_argument);
  }
}

TEST_CASE("exponential integrator") {
  const Grid g = make_grid(3, 16, 4.0 * std::numbers::pi);
  const PhysicalModel model = ideal_gas_model();
  const DerivedConstants c = derive_constants(model);
  std::mt19937_64 rng(137);

  SUBCASE("linear mode matches the semigroup over 100 steps") {
    const State u0 = random_state(g, rng, 3.0, 1.0);
    StepControls ctl;
    ctl.linear_only = true;
    Integrator integ(model, c, ctl);
    State u = u0;
    for (int s = 0; s < 100; ++s) u = integ.step(u, 0.05);
    const State ref = semigroup_apply(u0, 5.0, c);
    CHECK(l2_norm(u - ref) <= 1e-10 * l2_norm(ref));
  }

  SUBCASE("mass is conserved exactly") {
    State u = random_state(g, rng, 4.0, 0.02);
    Integrator integ(model, c);
    const cplx m0 = u.a.mean();
    for (int s = 0; s < 5; ++s) u = integ.step(u, 0.1);
    CHECK(std::abs(u.a.mean() - m0) <= 1e-14);
  }

  SUBCASE("Hermitian symmetry survives stepping") {
    State u = random_state(g, rng, 4.0, 0.02);
    Integrator integ(model, c);
    u = integ.step(u, 0.1);
    CHECK(hermitian_defect(u.a) <= 1e-13);
    CHECK(hermitian_defect(u.theta) <= 1e-13);
  }

  SUBCASE("Richardson halving shows second order") {
    const State u0 = random_state(g, rng, 4.0, 0.05);
    Integrator integ(model, c);
    const double T = 1.0;
    auto solve = [&](double dt) {
      State u = u0;
      const int n = static_cast<int>(std::round(T / dt));
      for (int s = 0; s < n; ++s) u = integ.step(u, dt);
      return u;
    };
    const State a = solve(0.0625);
    const State b = solve(0.03125);
    const State cc = solve(0.015625);
    const double e1 = l2_norm(a - b);
    const double e2 = l2_norm(b - cc);
    CHECK(e1 / e2 >= 3.6);
    CHECK(e1 / e2 <= 4.4);
  }

  SUBCASE("stable_dt reflects the advective scale") {
    State u = random_state(g, rng, 4.0, 0.02);
    Integrator integ(model, c);
    const double dt = integ.stable_dt(u);
    CHECK(dt > 0.0);
    double vmax = 0.0;
    for (int a = 0; a < 3; ++a)
      vmax = std::max(vmax, lp_norm(u.v.comp[static_cast<std::size_t>(a)],
                                    std::numeric_limits<double>::infinity()));
    CHECK(dt <= 0.5 * g.dx() / vmax * (1.0 + 1e-12));
  }
}
