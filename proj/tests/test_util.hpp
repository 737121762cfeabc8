#pragma once

#include <complex>
#include <limits>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "nslab/field.hpp"
#include "nslab/grid.hpp"

namespace nslab::testutil {

/// Random real band-limited field: complex Gaussian coefficients with a
/// radial envelope on modes 0 < |xi| <= cutoff, Hermitian-symmetrized and
/// normalized to unit sup norm so amplitude factors mean what they say.
inline SpectralField random_field(const Grid& g, std::mt19937_64& rng, double cutoff,
                                  const std::function<double(double)>& envelope = nullptr) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> c(g.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.on_nyquist(i)) continue;
    const double rho = std::sqrt(g.xi2(i));
    if (rho == 0.0 || rho > cutoff) continue;
    const double amp = envelope ? envelope(rho) : 1.0;
    c[i] = amp * cplx{gauss(rng), gauss(rng)};
  }
  SpectralField f(g, std::move(c));
  hermitize(f);
  const double sup = lp_norm(f, std::numeric_limits<double>::infinity());
  return sup > 0.0 ? (1.0 / sup) * f : f;
}

inline VectorField random_vector_field(const Grid& g, std::mt19937_64& rng, double cutoff,
                                       const std::function<double(double)>& envelope = nullptr) {
  VectorField v(g);
  for (int a = 0; a < g.dim(); ++a) v.comp[static_cast<std::size_t>(a)] = random_field(g, rng, cutoff, envelope);
  return v;
}

/// Real field 2*Re(A e^{i xi_m . x}) placed at integer mode m.
inline SpectralField single_mode(const Grid& g, const std::array<int, 3>& m, cplx amplitude) {
  std::vector<cplx> c(g.size(), cplx{0.0, 0.0});
  std::array<int, 3> idx{0, 0, 0}, midx{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a) {
    const int mm = m[static_cast<std::size_t>(a)];
    idx[static_cast<std::size_t>(a)] = mm >= 0 ? mm : mm + g.n();
    midx[static_cast<std::size_t>(a)] = mm <= 0 ? -mm : g.n() - mm;
  }
  c[g.flatten(idx)] = amplitude;
  c[g.flatten(midx)] = std::conj(amplitude);
  return SpectralField(g, std::move(c));
}

/// Brute-force convolution of sparse spectra: independent oracle for the
/// padded-FFT product path.
inline std::map<std::array<int, 3>, cplx> sparse_spectrum(const SpectralField& f, double tol = 0.0) {
  std::map<std::array<int, 3>, cplx> out;
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(f.coeffs()[i]) <= tol) continue;
    const auto c = g.unflatten(i);
    std::array<int, 3> m{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) m[static_cast<std::size_t>(a)] = g.mode(c[static_cast<std::size_t>(a)]);
    out[m] = f.coeffs()[i];
  }
  return out;
}

inline std::map<std::array<int, 3>, cplx> convolve_sparse(const std::map<std::array<int, 3>, cplx>& a,
                                                          const std::map<std::array<int, 3>, cplx>& b) {
  std::map<std::array<int, 3>, cplx> out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      std::array<int, 3> m{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      out[m] += ca * cb;
    }
  return out;
}

}  // namespace nslab::testutil
