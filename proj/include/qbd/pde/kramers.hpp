#pragma once

#include <vector>

#include "qbd/core/params.hpp"
#include "qbd/langevin/potential.hpp"
#include "qbd/pde/fields.hpp"
#include "qbd/pde/smoluchowski.hpp" // SolverDiagnostics

namespace qbd::pde {

struct KramersOptions {
    double dt = 0.0;     // <= 0: cfl fraction of the advective limit, capped at 0.1/gamma
    double cfl = 0.4;
    int save_every = 0;
    bool quantum_correction = false;   // lagged T-operator diffusion correction
    bool radiation_correction = false; // lagged tau*d2/dt2 of the dissipative flux
};

struct KramersResult {
    std::vector<PhaseSpaceField> snapshots;
    SolverDiagnostics diag;
};

/// Operator-split solve of the phase-space equation
///   df/dt + (p/m) df/dr - U'(r) df/dp = gamma d/dp (p f + m T df/dp)
/// with optional quantum corrections. Transport and force are advanced by a
/// flux-limited (minmod-MUSCL) upwind scheme written in equilibrium-weighted
/// form — fluxes act on h = f/M with M the discrete Maxwell-Boltzmann
/// profile, and the advection coefficients are discrete log-derivatives of
/// M, so M itself is an exact fixed point of the transport update. The
/// dissipative term uses Chang-Cooper weights with implicit Euler stepping
/// (exact discrete Maxwellian equilibrium, positivity preserving).
///
/// The quantum T-operator correction enters as an explicit extra flux
/// -gamma*m*(T beta^2 hbar^2/12) d/dp of a lagged three-level backward
/// estimate of d2f/dt2; the radiative friction correction subtracts
/// tau times the lagged second time difference of the dissipative-flux
/// divergence. Both vanish on time-constant states, so the Maxwell-
/// Boltzmann equilibrium is a fixed point with corrections on or off.
///
/// Preconditions: p_max >= 6*sqrt(m*T); explicit advective CFL bound
/// dt*(max|p|/m/dr + max|U'|/dp) <= cfl (violations raise a step-size error).
KramersResult solve_kramers(const PhaseSpaceField& f0, const langevin::Potential& potential,
                            const BathParams& params, double t_end,
                            const KramersOptions& opts = {});

/// Discrete Maxwell-Boltzmann state exp(-p^2/2mT)exp(-U/T), normalized on
/// the given grid. Shared by solver tests and initial-condition builders.
PhaseSpaceField maxwell_boltzmann(const SpaceGrid& rgrid, std::size_t np, double p_max,
                                  const langevin::Potential& potential,
                                  const BathParams& params);

} // namespace qbd::pde
