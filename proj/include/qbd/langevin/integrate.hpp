#pragma once

#include <span>
#include <vector>

#include "qbd/core/grids.hpp"
#include "qbd/core/params.hpp"
#include "qbd/langevin/potential.hpp"
#include "qbd/noise/noise.hpp"

namespace qbd::langevin {

/// Sampled solution of the equation of motion: positions R and momenta
/// P = m dR/dt, d components each, on the integration grid.
struct Trajectory {
    TimeGrid grid;
    std::vector<std::vector<double>> R; // [component][time index]
    std::vector<std::vector<double>> P;

    int components() const { return static_cast<int>(R.size()); }
};

/// Integrates m R'' + m gamma R' = -dU/dR + F(t) with the Heun
/// predictor-corrector, treating the pre-synthesized force trajectory as a
/// known smooth forcing sampled on the grid. Deterministic given inputs.
///
/// Stability bounds (violations raise a step-size error with a suggested
/// dt): gamma*dt < 0.1 and dt*sqrt(max|U''|/m) < 0.2.
Trajectory integrate(const Potential& potential, const BathParams& params,
                     const TimeGrid& grid, const noise::NoiseTrajectory& force,
                     std::span<const double> r0, std::span<const double> p0);

/// CSV export: '#' metadata, columns t, R_1..R_d, P_1..P_d.
void export_csv(const Trajectory& traj, const std::string& path);

} // namespace qbd::langevin
