#pragma once

#include <cmath>
#include <functional>

namespace nslab::quad {

// 16-node Gauss-Legendre rule on [0, 1].
inline constexpr int kGlN = 16;
inline constexpr double kGlX[kGlN] = {
    0.0052995325041750, 0.0277124884633837, 0.0671843988060841, 0.1222977958224985,
    0.1910618777986781, 0.2709916111713863, 0.3591982246103705, 0.4524937450811813,
    0.5475062549188187, 0.6408017753896295, 0.7290083888286137, 0.8089381222013219,
    0.8777022041775015, 0.9328156011939159, 0.9722875115366163, 0.9947004674958250};
inline constexpr double kGlW[kGlN] = {
    0.0135762297058770, 0.0311267619693239, 0.0475792558412464, 0.0623144856277669,
    0.0747979944082884, 0.0845782596975013, 0.0913017075224618, 0.0947253052275343,
    0.0947253052275343, 0.0913017075224618, 0.0845782596975013, 0.0747979944082884,
    0.0623144856277669, 0.0475792558412464, 0.0311267619693239, 0.0135762297058770};

inline double integrate(const std::function<double(double)>& f, double a, double b) {
  const double len = b - a;
  double s = 0.0;
  for (int i = 0; i < kGlN; ++i) s += kGlW[i] * f(a + len * kGlX[i]);
  return s * len;
}

/// Composite rule on log-spaced panels of [a, b] (a > 0).
inline double integrate_log(const std::function<double(double)>& f, double a, double b, int panels) {
  double s = 0.0;
  const double ratio = std::pow(b / a, 1.0 / panels);
  double lo = a;
  for (int p = 0; p < panels; ++p) {
    const double hi = (p + 1 == panels) ? b : lo * ratio;
    s += integrate(f, lo, hi);
    lo = hi;
  }
  return s;
}

}  // namespace nslab::quad
