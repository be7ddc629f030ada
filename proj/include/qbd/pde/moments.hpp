#pragma once

#include <span>

#include "qbd/core/params.hpp"
#include "qbd/langevin/potential.hpp"
#include "qbd/pde/fields.hpp"

namespace qbd::pde {

/// rho, V and Pi by p-quadrature on the grid:
/// rho = sum f dp, rho V = sum (p/m) f dp, Pi = sum p (p/m - V) f dp.
MomentFields extract_moments(const PhaseSpaceField& f, const BathParams& params);

/// Max-norm discrete residual of the continuity equation
/// d(rho)/dt + d(rho V)/dr = 0 over >= 3 equally spaced time levels
/// (centered time differences at the interior levels).
double residual_continuity(std::span<const PhaseSpaceField> levels, const BathParams& params);

/// Max-norm discrete residual of the force balance
/// m rho (dV/dt + V dV/dr) + m gamma rho V + rho U' + d(Pi)/dr = 0.
/// Spatial terms use the solver-consistent discrete operators (equilibrium-
/// weighted force, geometric-mean face pressure), so equilibrium fields
/// evaluate to zero at quadrature accuracy.
double residual_force_balance(std::span<const PhaseSpaceField> levels,
                              const langevin::Potential& potential, const BathParams& params);

} // namespace qbd::pde
