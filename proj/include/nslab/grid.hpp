#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace nslab {

/// Uniform periodic grid on a d-dimensional torus of edge length `length`,
/// with `n` points per axis. The resolved wavenumbers per axis are
/// 2*pi*m/length for m in [-n/2, n/2); the lowest nonzero frequency
/// 2*pi/length is the floor below which no dyadic block can be measured.
class Grid {
 public:
  Grid() = default;
  Grid(int dim, int n, double length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double length() const { return length_; }
  std::size_t size() const { return size_; }

  /// Signed integer mode index for storage index i (in [-n/2, n/2)).
  int mode(int i) const { return i <= n_ / 2 - 1 ? i : i - n_; }
  /// Frequency of storage index i along one axis.
  double freq(int i) const { return freq_[static_cast<std::size_t>(i)]; }
  /// Grid spacing.
  double dx() const { return length_ / n_; }
  /// Quadrature weight of one grid cell (dx^d).
  double cell_volume() const;
  /// Lowest nonzero |xi|.
  double fundamental() const;
  /// Largest resolved |xi| over the retained band (|m| <= n/2-1 per axis).
  double max_freq() const;

  /// Decompose a flat index into per-axis storage indices (unused axes 0).
  std::array<int, 3> unflatten(std::size_t idx) const;
  std::size_t flatten(const std::array<int, 3>& c) const;

  /// Frequency vector of a flat index (unused axes 0).
  std::array<double, 3> xi(std::size_t idx) const;
  /// |xi|^2 of a flat index.
  double xi2(std::size_t idx) const;
  /// Integer |m|^2 of a flat index (exact key for radial caching).
  long long m2(std::size_t idx) const;

  /// True if any axis of idx sits on the unpaired Nyquist plane m = -n/2.
  /// Fields in this library keep those coefficients zero so that every
  /// retained mode has a distinct Hermitian partner.
  bool on_nyquist(std::size_t idx) const;

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
  }

 private:
  int dim_ = 0;
  int n_ = 0;
  double length_ = 0.0;
  std::size_t size_ = 0;
  std::vector<double> freq_;
};

/// Build a grid; rejects dim outside {1,2,3}, odd or small n, nonpositive L.
Grid make_grid(int dim, int n, double length);

}  // namespace nslab
