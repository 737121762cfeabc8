#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nslab/field.hpp"
#include "nslab/grid.hpp"
#include "nslab/kernels.hpp"
#include "test_util.hpp"

using namespace nslab;
using testutil::random_field;
using testutil::random_vector_field;
using testutil::single_mode;

namespace {

// Independent derivative oracle: Richardson-extrapolated central second
// differences of a callable (not of grid samples), axis by axis.
double fd_laplacian(const std::function<double(const std::array<double, 3>&)>& f,
                    const std::array<double, 3>& x, int dim, double h) {
  auto second = [&](int axis, double step) {
    std::array<double, 3> xp = x, xm = x;
    xp[static_cast<std::size_t>(axis)] += step;
    xm[static_cast<std::size_t>(axis)] -= step;
    return (f(xp) - 2.0 * f(x) + f(xm)) / (step * step);
  };
  double lap = 0.0;
  for (int a = 0; a < dim; ++a) {
    const double d1 = second(a, h);
    const double d2 = second(a, 0.5 * h);
    const double d3 = second(a, 0.25 * h);
    const double r1 = (4.0 * d2 - d1) / 3.0;
    const double r2 = (4.0 * d3 - d2) / 3.0;
    lap += (16.0 * r2 - r1) / 15.0;
  }
  return lap;
}

}  // namespace

TEST_CASE("grid construction and wavenumber table") {
  const Grid g = make_grid(3, 32, 64.0 * std::numbers::pi);
  CHECK(g.fundamental() == doctest::Approx(1.0 / 32.0).epsilon(1e-15));

  const Grid g1 = make_grid(1, 8, 2.0 * std::numbers::pi);
  std::vector<int> modes;
  for (int i = 0; i < 8; ++i) modes.push_back(g1.mode(i));
  CHECK(modes == std::vector<int>{0, 1, 2, 3, -4, -3, -2, -1});
  CHECK(g1.freq(1) == doctest::Approx(1.0));
  CHECK(g1.freq(4) == doctest::Approx(-4.0));

  CHECK_THROWS_AS(make_grid(3, 7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 32, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 32, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(4, 32, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(3, 6, 1.0), std::invalid_argument);
}

TEST_CASE("physical-spectral round trip") {
  std::mt19937_64 rng(7);
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  const SpectralField f = random_field(g, rng, 6.0);
  const auto vals = to_physical(f);
  const SpectralField back = from_physical(g, vals);
  double maxerr = 0.0, maxval = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    maxerr = std::max(maxerr, std::abs(f.coeffs()[i] - back.coeffs()[i]));
    maxval = std::max(maxval, std::abs(f.coeffs()[i]));
  }
  CHECK(maxerr <= 1e-12 * maxval);
}

TEST_CASE("apply_multiplier basics") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(3);
  const SpectralField f = random_field(g, rng, 6.0);

  SUBCASE("identity symbol") {
    const SpectralField r = apply_multiplier(f, [](const std::array<double, 3>&) { return cplx{1.0, 0.0}; });
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.coeffs()[i] == f.coeffs()[i]);
  }

  SUBCASE("i xi_1 on a single mode") {
    const SpectralField m = single_mode(g, {2, 1, 0}, cplx{0.5, 0.25});
    const SpectralField r = apply_multiplier(m, [](const std::array<double, 3>& xi) { return cplx{0.0, xi[0]}; });
    std::array<int, 3> idx{2, 1, 0};
    const cplx expect = cplx{0.0, 2.0} * cplx{0.5, 0.25};
    CHECK(std::abs(r.coeffs()[g.flatten(idx)] - expect) < 1e-15);
    CHECK(hermitian_defect(r) < 1e-15);
  }

  SUBCASE("non-finite symbol at populated mode rejected") {
    CHECK_THROWS_AS(apply_multiplier(f, [](const std::array<double, 3>& xi) {
                      const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
                      return cplx{1.0 / (r2 - 4.0) * 0.0 / 0.0, 0.0};
                    }),
                    std::invalid_argument);
  }
}

TEST_CASE("|xi|^2 symbol matches finite-difference Laplacian oracle") {
  const double length = 16.0;
  const Grid g = make_grid(3, 64, length);
  const double cx = 0.5 * length;
  auto gaussian = [&](const std::array<double, 3>& x) {
    const double r2 = (x[0] - cx) * (x[0] - cx) + (x[1] - cx) * (x[1] - cx) + (x[2] - cx) * (x[2] - cx);
    return std::exp(-0.5 * r2);
  };
  const SpectralField f = from_function(g, gaussian);
  const SpectralField mlap = apply_multiplier(f, [](const std::array<double, 3>& xi) {
    return cplx{xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2], 0.0};
  });
  const auto vals = to_physical(mlap);  // this is -Laplacian f

  double maxref = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 97) {
    const auto x = grid_point(g, i);
    maxref = std::max(maxref, std::abs(fd_laplacian(gaussian, x, 3, 1e-2)));
  }
  double maxerr = 0.0;
  for (std::size_t i = 0; i < g.size(); i += 97) {
    const auto x = grid_point(g, i);
    maxerr = std::max(maxerr, std::abs(-vals[i] - fd_laplacian(gaussian, x, 3, 1e-2)));
  }
  CHECK(maxerr <= 1e-8 * maxref);
}

TEST_CASE("lambda_s") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(11);
  SpectralField f = random_field(g, rng, 6.0);

  SUBCASE("s = 0 is the identity away from the mean") {
    const SpectralField r = lambda_s(f, 0.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(std::abs(r.coeffs()[i] - f.coeffs()[i]) < 1e-15);
    CHECK(r.coeffs()[0] == cplx{0.0, 0.0});
  }

  SUBCASE("s = 2 scales a |xi| = 2 mode by 4") {
    const SpectralField m = single_mode(g, {0, 2, 0}, cplx{1.0, -1.0});
    const SpectralField r = lambda_s(m, 2.0);
    std::array<int, 3> idx{0, 2, 0};
    CHECK(std::abs(r.coeffs()[g.flatten(idx)] - 4.0 * cplx{1.0, -1.0}) < 1e-14);
  }

  SUBCASE("inverse composition on a mean-zero field") {
    const SpectralField r = lambda_s(lambda_s(f, 1.0), -1.0);
    double maxerr = 0.0, scale = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
      maxerr = std::max(maxerr, std::abs(r.coeffs()[i] - f.coeffs()[i]));
      scale = std::max(scale, std::abs(f.coeffs()[i]));
    }
    CHECK(maxerr <= 1e-12 * scale);
  }

  SUBCASE("negative order rejects nonzero mean") {
    f.coeffs()[0] = cplx{1.0, 0.0};
    CHECK_THROWS_AS(lambda_s(f, -1.0), std::invalid_argument);
  }
}

TEST_CASE("leray split") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(5);

  SUBCASE("gradient field goes fully to the potential part") {
    const SpectralField phi = random_field(g, rng, 5.0);
    const VectorField gp = grad(phi);
    const auto [p, q] = leray_split(gp);
    CHECK(l2_norm_spectral(p) <= 1e-12 * l2_norm_spectral(gp));
    CHECK(l2_norm_spectral(q - gp) <= 1e-12 * l2_norm_spectral(gp));
  }

  SUBCASE("transverse single mode is untouched") {
    VectorField v(g);
    v.comp[0] = single_mode(g, {0, 0, 3}, cplx{1.0, 2.0});  // polarization x, wavevector z
    const auto [p, q] = leray_split(v);
    CHECK(l2_norm_spectral(q) <= 1e-13 * l2_norm_spectral(v));
    CHECK(l2_norm_spectral(p - v) <= 1e-13 * l2_norm_spectral(v));
  }

  SUBCASE("projector identities on a random field") {
    const VectorField v = random_vector_field(g, rng, 6.0);
    const auto [p, q] = leray_split(v);
    CHECK(l2_norm_spectral(div(p)) <= 1e-12 * l2_norm_spectral(v));
    CHECK(l2_norm_spectral((p + q) - v) <= 1e-12 * l2_norm_spectral(v));
    // Q's coefficients are parallel to xi: curl-free means grad(div^{-1}) form;
    // equivalently P and Q are L2-orthogonal.
    double dot = 0.0;
    for (int a = 0; a < 3; ++a)
      for (std::size_t i = 0; i < g.size(); ++i)
        dot += (std::conj(p.comp[static_cast<std::size_t>(a)].coeffs()[i]) *
                q.comp[static_cast<std::size_t>(a)].coeffs()[i])
                   .real();
    CHECK(std::abs(dot) <= 1e-12 * l2_norm_spectral(v) * l2_norm_spectral(v));
  }
}

TEST_CASE("grad, div, laplacian") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(13);

  SUBCASE("gradient of a constant vanishes") {
    std::vector<cplx> c(g.size(), cplx{0.0, 0.0});
    c[0] = cplx{3.5, 0.0};
    const SpectralField constf(g, std::move(c));
    const VectorField gf = grad(constf);
    CHECK(l2_norm_spectral(gf) == 0.0);
  }

  SUBCASE("div grad equals laplacian") {
    const SpectralField f = random_field(g, rng, 6.0);
    const SpectralField lhs = div(grad(f));
    const SpectralField rhs = laplacian(f);
    CHECK(l2_norm_spectral(lhs - rhs) <= 1e-12 * l2_norm_spectral(rhs));
  }

  SUBCASE("laplacian of a single mode") {
    const SpectralField m = single_mode(g, {1, 2, 2}, cplx{1.0, 0.0});
    const SpectralField r = laplacian(m);
    std::array<int, 3> idx{1, 2, 2};
    CHECK(std::abs(r.coeffs()[g.flatten(idx)] + 9.0 * cplx{1.0, 0.0}) < 1e-14);
  }
}

TEST_CASE("Parseval identity with the fixed normalization") {
  std::mt19937_64 rng(17);
  for (int d : {1, 2, 3}) {
    const Grid g = make_grid(d, 16, 3.0);
    const SpectralField f = random_field(g, rng, g.max_freq());
    const double quad = lp_norm(f, 2.0);
    const double spec = l2_norm_spectral(f);
    CHECK(std::abs(quad - spec) <= 1e-12 * spec);
  }
}

TEST_CASE("multiplier operations commute") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(19);
  const SpectralField f = random_field(g, rng, 6.0);
  const SpectralField a = lambda_s(laplacian(f), 1.0);
  const SpectralField b = laplacian(lambda_s(f, 1.0));
  CHECK(l2_norm_spectral(a - b) <= 1e-12 * l2_norm_spectral(a));

  const SpectralField c = div(grad(lambda_s(f, -1.0)));
  const SpectralField dd = lambda_s(div(grad(f)), -1.0);
  CHECK(l2_norm_spectral(c - dd) <= 1e-12 * (l2_norm_spectral(c) + 1e-30));
}

TEST_CASE("Hermitian symmetry is preserved by module operations") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(23);
  const SpectralField f = random_field(g, rng, 6.0);
  CHECK(hermitian_defect(f) < 1e-14);
  CHECK(hermitian_defect(laplacian(f)) < 1e-12);
  CHECK(hermitian_defect(lambda_s(f, 1.5)) < 1e-12);
  const VectorField gf = grad(f);
  for (const auto& c : gf.comp) CHECK(hermitian_defect(c) < 1e-12);
  const SpectralField p = dealiased_product(f, f);
  CHECK(hermitian_defect(p) < 1e-13);
}

TEST_CASE("dealiased product equals the exact convolution") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(29);
  // sparse-ish fields so the brute-force convolution stays cheap
  SpectralField a = single_mode(g, {3, -2, 1}, cplx{0.4, 0.1}) + single_mode(g, {-5, 0, 2}, cplx{0.2, -0.3});
  SpectralField b = single_mode(g, {4, 4, -3}, cplx{-0.7, 0.2}) + single_mode(g, {1, 1, 1}, cplx{0.05, 0.6});
  const SpectralField p = dealiased_product(a, b);

  const auto oracle = testutil::convolve_sparse(testutil::sparse_spectrum(a), testutil::sparse_spectrum(b));
  for (const auto& [m, coeff] : oracle) {
    bool retained = true;
    for (int ax = 0; ax < 3; ++ax)
      if (std::abs(m[static_cast<std::size_t>(ax)]) > g.n() / 2 - 1) retained = false;
    if (!retained) continue;
    std::array<int, 3> idx{};
    for (int ax = 0; ax < 3; ++ax) {
      const int mm = m[static_cast<std::size_t>(ax)];
      idx[static_cast<std::size_t>(ax)] = mm >= 0 ? mm : mm + g.n();
    }
    CHECK(std::abs(p.coeffs()[g.flatten(idx)] - coeff) < 1e-13);
  }
}

TEST_CASE("serial and parallel kernels agree bit-for-bit") {
  std::mt19937_64 rng(31);
  std::vector<double> data(100001);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& d : data) d = u(rng);
  const double s1 = kernels::sum_indexed(data.size(), [&](std::size_t i) { return data[i] * data[i]; },
                                         kernels::Exec::serial);
  const double s2 = kernels::sum_indexed(data.size(), [&](std::size_t i) { return data[i] * data[i]; },
                                         kernels::Exec::parallel);
  CHECK(s1 == s2);

  const double m1 = kernels::max_indexed(data.size(), [&](std::size_t i) { return data[i]; },
                                         kernels::Exec::serial);
  const double m2 = kernels::max_indexed(data.size(), [&](std::size_t i) { return data[i]; },
                                         kernels::Exec::parallel);
  CHECK(m1 == m2);
}

TEST_CASE("dyadic dilation keeps grid values and shifts frequencies") {
  const Grid g = make_grid(3, 16, 2.0 * std::numbers::pi);
  std::mt19937_64 rng(37);
  const SpectralField f = random_field(g, rng, 5.0);
  const SpectralField h = dyadic_dilate(f);
  CHECK(h.grid().length() == doctest::Approx(std::numbers::pi));
  // physical samples on the half torus coincide with f's samples
  const auto vf = to_physical(f);
  const auto vh = to_physical(h);
  for (std::size_t i = 0; i < vf.size(); i += 53) CHECK(vh[i] == doctest::Approx(vf[i]).epsilon(1e-12));
  // whole-space L^p scaling: ||f(2.)||_p = 2^{-d/p} ||f||_p
  CHECK(lp_norm(h, 2.0) == doctest::Approx(std::pow(2.0, -1.5) * lp_norm(f, 2.0)).epsilon(1e-12));
  CHECK(lp_norm(h, 4.0) == doctest::Approx(std::pow(2.0, -0.75) * lp_norm(f, 4.0)).epsilon(1e-12));
}
