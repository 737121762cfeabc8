#include "nslab/fitting.hpp"

#include <cmath>
#include <stdexcept>

namespace nslab {

RateFit fit_rate(const std::vector<std::pair<double, double>>& series, double window) {
  if (!(window > 0.0 && window <= 1.0)) throw std::invalid_argument("fit_rate: window must be in (0, 1]");
  if (series.size() < 2) throw std::invalid_argument("fit_rate: need at least two samples");

  double lo = 1e300, hi = -1e300;
  for (const auto& [t, v] : series) {
    (void)v;
    if (!(t > 0.0)) throw std::invalid_argument("fit_rate: times must be positive");
    lo = std::min(lo, std::log(t));
    hi = std::max(hi, std::log(t));
  }
  const double cut = hi - window * (hi - lo);

  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, v] : series) {
    if (std::log(t) < cut - 1e-12) continue;
    if (!(v > 0.0)) throw std::invalid_argument("fit_rate: nonpositive value in fit window");
    pts.emplace_back(std::log(t), std::log(v));
  }
  if (pts.size() < 8) throw std::invalid_argument("fit_rate: fewer than 8 points in fit window");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  if (!(vxx > 0.0)) throw std::invalid_argument("fit_rate: degenerate time grid");

  RateFit fit;
  fit.points = pts.size();
  fit.exponent = vxy / vxx;
  fit.r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  fit.reliable = fit.r2 >= 0.98;
  return fit;
}

}  // namespace nslab
