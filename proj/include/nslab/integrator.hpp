#pragma once

#include <functional>
#include <limits>
#include <map>

#include "nslab/linear.hpp"
#include "nslab/nonlinear.hpp"

namespace nslab {

struct StepControls {
  double dt_max = std::numeric_limits<double>::infinity();
  double advect_safety = 0.5;   ///< dt <= safety * dx / max|v|
  double visc_safety = 0.25;    ///< dt <= safety * dx^2 / max variable-coefficient weight
  double density_floor = 0.1;   ///< reject steps leaving min(1+a) below this
  int max_halvings = 8;
  bool linear_only = false;     ///< drop (f,g,k); the stepper then equals the semigroup
};

/// Two-stage exponential integrator: the linear part is advanced exactly by
/// the per-mode semigroup, the nonlinear part by
///   U* = E(h) U + h phi1(hM) N(U)
///   U+ = U* + h phi2(hM) (N(U*) - N(U))
/// which is second order. The mean of a is conserved exactly (f is a pure
/// divergence). A step that violates the density floor is retried as two
/// half steps, up to a bounded number of halvings.
class Integrator {
 public:
  Integrator(PhysicalModel model, DerivedConstants consts, StepControls controls = {});

  /// Advance by exactly dt (sub-splitting internally if the floor is hit).
  State step(const State& s, double dt);

  /// Stability bound from the current state: advection plus the
  /// variable-coefficient corrections (linear stiffness is handled exactly
  /// by the integrating factor and does not constrain dt).
  double stable_dt(const State& s) const;

  /// March to t_end with steps min(dt_nominal, stable_dt), landing exactly
  /// on t_end; on_step runs after every accepted step.
  State advance(State s, double t_end, double dt_nominal,
                const std::function<void(const State&)>& on_step = nullptr);

  const DerivedConstants& constants() const { return consts_; }

 private:
  State attempt(const State& s, double dt, int depth);
  const SemigroupTable& table_for(const Grid& g, double dt);

  PhysicalModel model_;
  DerivedConstants consts_;
  StepControls controls_;
  std::map<std::pair<long long, long long>, SemigroupTable> tables_;  // keyed by (grid id, dt bits)
};

/// One-shot convenience wrapper around Integrator::step.
State step(const State& s, double dt, const PhysicalModel& model, const DerivedConstants& consts,
           StepControls controls = {});

}  // namespace nslab
