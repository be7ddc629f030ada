#pragma once

#include <vector>

#include "qbd/core/grids.hpp"
#include "qbd/core/params.hpp"
#include "qbd/pde/fields.hpp"

namespace qbd::ops {

/// Quantum potential Q(r) sampled on a SpaceGrid, in energy units.
struct QuantumPotentialField {
    SpaceGrid grid;
    std::vector<double> values;
};

/// Q = -hbar^2 (d^2/dr^2 sqrt(rho)) / (2 m sqrt(rho)), computed by central
/// second differences of sqrt(rho) (one-sided at bounded-domain walls).
/// Q is identically zero when hbar = 0 or rho is uniform. Cells with
/// rho < 1e-12 * max(rho) are degenerate: Q is singular near nodes, so this
/// raises rather than clamping silently.
QuantumPotentialField bohm_potential(const pde::DensityField& rho, const BathParams& params);

} // namespace qbd::ops
