#pragma once

#include "nslab/model.hpp"
#include "nslab/state.hpp"

namespace nslab {

/// Right-hand side of the rescaled system at one state.
struct NonlinearTerms {
  SpectralField f;
  VectorField g;
  SpectralField k;
};

/// Full nonlinear right-hand side in flux form: f = -div(a v); g carries
/// transport, pressure, coupling and the variable-coefficient viscous
/// divergence; k carries transport, conduction in flux form and the
/// quadratic dissipation. Quadratic
/// products are exactly dealiased (3/2 padding); coefficient functions of
/// a are sampled pointwise on the base grid. Rejects states with
/// nonpositive density.
NonlinearTerms compute_fgk(const State& s, const PhysicalModel& model, const DerivedConstants& c);

SpectralField compute_f(const State& s);
VectorField compute_g(const State& s, const PhysicalModel& model, const DerivedConstants& c);
SpectralField compute_k(const State& s, const PhysicalModel& model, const DerivedConstants& c);

/// Independently coded sum of the six momentum pieces, with the viscous
/// divergence expanded by the product rule (coefficient gradients taken
/// spectrally on the sampled coefficient fields). Cross-check for
/// compute_g; agrees to machine precision on the retained band.
VectorField assemble_g_expanded(const State& s, const PhysicalModel& model, const DerivedConstants& c);

/// Same for the temperature source: conduction split into a K(a)*lap(theta)
/// part plus a grad-coefficient part, dissipation written on the raw
/// velocity-gradient contractions.
SpectralField assemble_k_expanded(const State& s, const PhysicalModel& model, const DerivedConstants& c);

/// w = grad((-Delta)^{-1}(a - div v)); requires mean-zero a.
VectorField effective_velocity(const State& s);

/// Change of unknowns from physical perturbation fields (b, u, E) on their
/// own torus to the rescaled State: amplitudes (b, chi0 u,
/// chi0 sqrt(C_v/T_inf) E), space dilated by nu_inf * chi0 (realized by
/// reinterpreting the torus length). Rejects nonpositive density.
State rescale_from_physical(const SpectralField& b, const VectorField& u, const SpectralField& E,
                            const PhysicalModel& model);

/// Inverse map (round-trip oracle).
void physical_from_rescaled(const State& s, const PhysicalModel& model, SpectralField& b, VectorField& u,
                            SpectralField& E);

}  // namespace nslab
