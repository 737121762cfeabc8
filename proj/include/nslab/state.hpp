#pragma once

#include "nslab/field.hpp"

namespace nslab {

/// Rescaled unknowns: density perturbation a, velocity v, temperature
/// perturbation theta, at a given time. Density positivity means
/// 1 + a(x) > 0 pointwise.
struct State {
  SpectralField a;
  VectorField v;
  SpectralField theta;
  double time = 0.0;

  State() = default;
  explicit State(const Grid& g) : a(g), v(g), theta(g) {}
  const Grid& grid() const { return a.grid(); }
};

State operator+(const State& x, const State& y);
State operator-(const State& x, const State& y);
State operator*(double s, const State& x);

/// sum of the component L^2 norms (tuple convention used throughout)
double l2_norm(const State& s);

/// min over the grid of 1 + a(x)
double min_density(const State& s);

}  // namespace nslab
