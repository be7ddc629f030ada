#pragma once

#include <complex>
#include <vector>

#include "qbd/core/params.hpp"

namespace qbd::pde {

enum class ModeOrder { Classical, Semiclassical };

/// Decay rates s of a single spatial Fourier mode rho_q ~ exp(s t) of the
/// free-particle diffusion equation with semi-classical temperature and
/// radiative friction corrections. Substituting the mode ansatz gives
///   m*gamma*s - m*tau*s^3 = -T q^2 + (T beta^2 hbar^2 q^2 / 12) s^2,
/// a cubic in s (quadratic for tau = 0, linear in the classical limit).
struct ModeDecay {
    double q = 0.0;
    std::vector<std::complex<double>> roots;
    /// Root continuously connected to the classical s = -T q^2/(m gamma)
    /// as (hbar, tau) -> 0, identified by a 16-step homotopy.
    std::complex<double> physical{0.0, 0.0};
    bool has_unstable = false; // some root with Re(s) > 0 (radiative runaways)
    bool unstable = false;     // no root with Re(s) <= 0: instability report
};

ModeDecay free_mode_evolution(double q, const BathParams& params, ModeOrder order);

} // namespace qbd::pde
