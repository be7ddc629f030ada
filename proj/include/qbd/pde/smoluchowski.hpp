#pragma once

#include <vector>

#include "qbd/core/params.hpp"
#include "qbd/langevin/potential.hpp"
#include "qbd/pde/fields.hpp"

namespace qbd::pde {

struct SmoluchowskiOptions {
    double dt = 0.0;     // <= 0 selects an automatic accuracy/stability step
    int save_every = 0;  // snapshot cadence in steps; 0 keeps first and last only
    bool quantum_correction = false;   // lagged (beta*hbar)^2/12 d2/dt2 diffusion term
    bool radiation_correction = false; // lagged (tau/gamma) d2/dt2 on the time derivative
};

struct SolverDiagnostics {
    std::size_t steps = 0;
    double dt = 0.0;
    double mass_initial = 0.0;
    double mass_final = 0.0;
    double min_value = 0.0;        // most negative field value encountered
    double max_step_change = 0.0;  // max over steps of ||f^{n+1} - f^n||_inf
    double last_step_change = 0.0;
    std::vector<double> step_change_history; // recorded at snapshot times
};

struct SmoluchowskiResult {
    std::vector<DensityField> snapshots;
    SolverDiagnostics diag;
};

/// Conservative flux-form solve of the overdamped density equation
///   m*gamma*d(rho)/dt = d/dr ( rho dU/dr + T d(rho)/dr ),
/// Chang-Cooper drift weights (the discrete Boltzmann profile exp(-U/T) is
/// an exact steady state) with implicit Euler stepping. The quantum and
/// radiative corrections are applied as explicit sources from lagged
/// three-level backward time differences; both vanish identically on any
/// time-constant state, so the steady state is correction-independent.
SmoluchowskiResult solve_smoluchowski(const DensityField& rho0,
                                      const langevin::Potential& potential,
                                      const BathParams& params, double t_end,
                                      const SmoluchowskiOptions& opts = {});

/// Same dynamics plus the nonlinear quantum drift d/dr(rho dQ/dr) with Q the
/// Bohm potential of the current density, recomputed each step (explicit;
/// the linear diffusion stays semi-implicit). The explicit fourth-order
/// effective operator bounds the step: dt <= 0.9 * dr^4 m^2 gamma/(2 hbar^2).
/// Coincides with solve_smoluchowski when hbar = 0.
SmoluchowskiResult solve_smoluchowski_quantum(const DensityField& rho0,
                                              const langevin::Potential& potential,
                                              const BathParams& params, double t_end,
                                              const SmoluchowskiOptions& opts = {});

} // namespace qbd::pde
