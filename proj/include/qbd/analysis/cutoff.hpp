#pragma once

#include "qbd/core/params.hpp"

namespace qbd::analysis {

/// Equilibrium momentum dispersion of the free particle as a spectral
/// integral over [0, Omega]:
///   <P^2> = (d*m*gamma/pi) * Integral hbar*w*coth(beta*hbar*w/2)/(w^2+gamma^2) dw.
/// The w -> 0 limit of the numerator (2*T) is handled exactly; adaptive
/// quadrature to 1e-10 relative. Grows without bound (logarithmically) as
/// Omega -> infinity for hbar > 0.
double momentum_dispersion_integral(double Omega, const BathParams& params);

struct CutoffResult {
    double Omega = 0.0;
    double residual = 0.0; // value of the integral equation minus 2*pi
    int iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

/// Solves the cutoff-frequency integral equation
///   beta*hbar*gamma * Integral_0^1 coth(beta*hbar*Omega*sqrt(x)/2)/(x+(gamma/Omega)^2) dx = 2*pi
/// by a bracketing root solve on the (monotone in Omega) residual. The inner
/// integral uses the substitution x = u^2, which removes the integrable
/// 1/sqrt(x) behavior at the origin; absolute tolerance 1e-12 so the 1e-10
/// residual target is meaningful. Initial bracket [0.01, 100] times the
/// geometric-mean estimate sqrt(2*pi*gamma*T/hbar), expanded on failure.
CutoffResult solve_cutoff(const BathParams& params);

/// Collision-frequency cutoff for a mean-free path lambda:
/// Omega = 2*pi*sqrt(T/m)/lambda.
double collision_cutoff(double lambda, const BathParams& params);

/// Friction implied by the mean-free-path estimate: gamma = 2*pi*hbar/(m*lambda^2).
double collision_friction(double lambda, const BathParams& params);

} // namespace qbd::analysis
