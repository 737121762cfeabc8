#include "nslab/state.hpp"

#include <algorithm>

namespace nslab {

State operator+(const State& x, const State& y) {
  State out(x.grid());
  out.a = x.a + y.a;
  out.v = x.v + y.v;
  out.theta = x.theta + y.theta;
  out.time = x.time;
  return out;
}

State operator-(const State& x, const State& y) {
  State out(x.grid());
  out.a = x.a - y.a;
  out.v = x.v - y.v;
  out.theta = x.theta - y.theta;
  out.time = x.time;
  return out;
}

State operator*(double s, const State& x) {
  State out(x.grid());
  out.a = s * x.a;
  out.v = s * x.v;
  out.theta = s * x.theta;
  out.time = x.time;
  return out;
}

double l2_norm(const State& s) {
  return l2_norm_spectral(s.a) + l2_norm_spectral(s.v) + l2_norm_spectral(s.theta);
}

double min_density(const State& s) {
  const auto vals = to_physical(s.a);
  double m = 1e300;
  for (double v : vals) m = std::min(m, 1.0 + v);
  return m;
}

}  // namespace nslab
