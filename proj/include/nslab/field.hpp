#pragma once

#include <array>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "nslab/grid.hpp"
#include "nslab/kernels.hpp"

namespace nslab {

using cplx = std::complex<double>;

/// Scalar field stored as Fourier coefficients on a periodic grid.
/// Invariants maintained by every operation here:
///   - Hermitian symmetry (the physical-space field is real),
///   - empty Nyquist planes (|m| <= n/2-1 per axis), so each retained mode
///     has a distinct conjugate partner and spectral differentiation is
///     involution-safe.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(Grid g) : grid_(std::move(g)), coeffs_(grid_.size(), cplx{0.0, 0.0}) {}
  SpectralField(Grid g, std::vector<cplx> coeffs);

  const Grid& grid() const { return grid_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  std::vector<cplx>& coeffs() { return coeffs_; }

  cplx mean() const { return coeffs_.empty() ? cplx{} : coeffs_[0]; }

 private:
  Grid grid_;
  std::vector<cplx> coeffs_;
};

/// d-component vector field; each component satisfies SpectralField invariants.
struct VectorField {
  std::vector<SpectralField> comp;

  VectorField() = default;
  explicit VectorField(const Grid& g) : comp(static_cast<std::size_t>(g.dim()), SpectralField(g)) {}
  const Grid& grid() const { return comp.at(0).grid(); }
  int dim() const { return static_cast<int>(comp.size()); }
};

// ---- physical <-> spectral -------------------------------------------------

std::vector<double> to_physical(const SpectralField& f);
SpectralField from_physical(const Grid& g, const std::vector<double>& values);
SpectralField from_function(const Grid& g, const std::function<double(const std::array<double, 3>&)>& fn);

/// Physical-space coordinates of flat grid index.
std::array<double, 3> grid_point(const Grid& g, std::size_t idx);

// ---- multipliers and differential operators --------------------------------

/// Pointwise Fourier multiplier c(xi) -> m(xi) c(xi). The caller resolves
/// xi = 0; a non-finite symbol value at a resolved mode with a nonzero
/// coefficient is an error. Hermitian symmetry survives when
/// m(-xi) = conj(m(xi)).
SpectralField apply_multiplier(const SpectralField& f, const std::function<cplx(const std::array<double, 3>&)>& m);

/// Radial multiplier m(|xi|); m(0) applied at the zero mode as given.
SpectralField apply_radial_multiplier(const SpectralField& f, const std::function<double(double)>& m);

/// Lambda^s f = F^{-1}(|xi|^s F f); the zero mode maps to zero. For s < 0
/// the input must have zero mean.
SpectralField lambda_s(const SpectralField& f, double s);

VectorField grad(const SpectralField& f);
SpectralField div(const VectorField& v);
SpectralField laplacian(const SpectralField& f);
VectorField laplacian(const VectorField& v);

/// Orthogonal split v = P v + Q v with div(P v) = 0 and Q v a gradient
/// (Fourier coefficient parallel to xi). The mean mode goes to P.
std::pair<VectorField, VectorField> leray_split(const VectorField& v);

// ---- algebra ---------------------------------------------------------------

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(double s, const SpectralField& f);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double s, const VectorField& v);

/// Exact (fully dealiased) product of two band-limited fields: both inputs
/// are synthesized on a 3/2-padded grid, multiplied pointwise, and the
/// result truncated back to the retained band. For inputs supported on
/// [-n/2, n/2) the retained coefficients equal the exact convolution sum.
SpectralField dealiased_product(const SpectralField& a, const SpectralField& b);

/// Pointwise composition G(f(x)) sampled on the base grid (compositions of
/// non-polynomial functions cannot be fully dealiased; adequate in the
/// small-amplitude regime this library targets).
SpectralField compose(const SpectralField& f, const std::function<double(double)>& fn);

/// Padded physical samples of a field, for kernels that take many products
/// of the same factors: synthesize once, multiply pointwise, analyze once.
struct PaddedPhysical {
  Grid base;
  int np = 0;
  std::vector<double> values;
};

int padded_points(const Grid& g);
PaddedPhysical to_padded(const SpectralField& f);
/// Analyze padded-grid pointwise data back to the retained band of `base`.
SpectralField from_padded_values(const Grid& base, int np, const std::vector<double>& values);

// ---- norms ------------------------------------------------------------------

/// Grid-quadrature L^p norm: (dx^d * sum |f(x_i)|^p)^{1/p}; p = inf is the
/// grid max.
double lp_norm(const SpectralField& f, double p);
/// L^p of the pointwise Euclidean magnitude.
double lp_norm(const VectorField& v, double p);
/// L^2 via Parseval: L^{d/2} * l2 norm of coefficients.
double l2_norm_spectral(const SpectralField& f);
double l2_norm_spectral(const VectorField& v);

// ---- hygiene ----------------------------------------------------------------

/// Enforce c(-k) = conj(c(k)) by averaging mode pairs; zero mode made real.
void hermitize(SpectralField& f);
/// Zero the unpaired Nyquist planes.
void zero_nyquist(SpectralField& f);
/// Max |c(k) - conj(c(-k))| over the retained band.
double hermitian_defect(const SpectralField& f);

/// Realize f(2x) with whole-space dilation semantics: the same coefficient
/// array reinterpreted on the half-length torus, where every stored mode
/// index keeps its value but its frequency doubles.
SpectralField dyadic_dilate(const SpectralField& f);

}  // namespace nslab
