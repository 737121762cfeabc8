#include "nslab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nslab {

Grid::Grid(int dim, int n, double length) : dim_(dim), n_(n), length_(length) {
  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);
  freq_.resize(static_cast<std::size_t>(n_));
  const double base = 2.0 * std::numbers::pi / length_;
  for (int i = 0; i < n_; ++i) freq_[static_cast<std::size_t>(i)] = base * mode(i);
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int a = 0; a < dim_; ++a) v *= dx();
  return v;
}

double Grid::fundamental() const { return 2.0 * std::numbers::pi / length_; }

double Grid::max_freq() const {
  const double per_axis = fundamental() * (n_ / 2 - 1);
  return per_axis * std::sqrt(static_cast<double>(dim_));
}

std::array<int, 3> Grid::unflatten(std::size_t idx) const {
  std::array<int, 3> c{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    c[static_cast<std::size_t>(a)] = static_cast<int>(idx % static_cast<std::size_t>(n_));
    idx /= static_cast<std::size_t>(n_);
  }
  return c;
}

std::size_t Grid::flatten(const std::array<int, 3>& c) const {
  std::size_t idx = 0;
  for (int a = 0; a < dim_; ++a)
    idx = idx * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c[static_cast<std::size_t>(a)]);
  return idx;
}

std::array<double, 3> Grid::xi(std::size_t idx) const {
  const auto c = unflatten(idx);
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) out[static_cast<std::size_t>(a)] = freq(c[static_cast<std::size_t>(a)]);
  return out;
}

double Grid::xi2(std::size_t idx) const {
  const auto v = xi(idx);
  return v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
}

long long Grid::m2(std::size_t idx) const {
  const auto c = unflatten(idx);
  long long s = 0;
  for (int a = 0; a < dim_; ++a) {
    const long long m = mode(c[static_cast<std::size_t>(a)]);
    s += m * m;
  }
  return s;
}

bool Grid::on_nyquist(std::size_t idx) const {
  const auto c = unflatten(idx);
  for (int a = 0; a < dim_; ++a)
    if (c[static_cast<std::size_t>(a)] == n_ / 2) return true;
  return false;
}

Grid make_grid(int dim, int n, double length) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("make_grid: dim must be 1, 2 or 3");
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("make_grid: n must be even and >= 8");
  if (!(length > 0.0)) throw std::invalid_argument("make_grid: length must be positive");
  return Grid(dim, n, length);
}

}  // namespace nslab
