#pragma once

#include <utility>
#include <vector>

namespace nslab {

struct RateFit {
  double exponent = 0.0;
  double r2 = 0.0;
  bool reliable = true;  ///< r2 >= 0.98 over the fit window
  std::size_t points = 0;
};

/// Least-squares slope of log(value) against log(t) over the late-time
/// window: `window` is the fraction of the (log-)time axis kept at the end
/// (1.0 fits everything). Requires at least 8 points in the window and
/// positive values there.
RateFit fit_rate(const std::vector<std::pair<double, double>>& series, double window = 0.1);

}  // namespace nslab
