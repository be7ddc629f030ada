#pragma once

#include "qbd/core/constants.hpp"
#include "qbd/core/params.hpp"

namespace qbd::analysis {

/// Temperature at which the semi-classical diffusion equation reduces to
/// the classical one: T* = (hbar/2) * sqrt(gamma/(3*tau)) (k_B = 1).
/// At T* the two second-time-derivative correction coefficients coincide:
/// tau/gamma = beta*^2 hbar^2 / 12. Requires tau > 0.
double classical_reduction_temperature(const BathParams& params);

struct UniversalTD {
    double T_star = 0.0;    // kelvin
    double D = 0.0;         // m^2/s
    double product = 0.0;   // T* * D
    double reference = 0.0; // hbar c^2 / (8 k_B alpha)
    double relative_deviation = 0.0;
    double tau = 0.0;       // radiation time constant used, s
};

/// The universal product T* * D = hbar c^2 / (8 k_B alpha), independent of
/// mass and friction. params.m [kg] and params.gamma [1/s] are SI here; tau
/// is computed from the radiation formula tau = e^2 / (6 pi eps0 m c^3), and
/// D = k_B T* / (m gamma) is the classical diffusion coefficient at T*.
UniversalTD universal_TD(const BathParams& params, const ConstantsTable& table);

} // namespace qbd::analysis
