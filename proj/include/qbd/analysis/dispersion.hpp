#pragma once

#include <complex>

#include "qbd/core/params.hpp"

namespace qbd::analysis {

/// One evaluation of the dissipative-pattern dispersion relation
///   (hbar/2m)^2 q^4 + (hbar*w/2m) coth(beta*hbar*w/2) q^2 - i*w*(gamma + tau*w^2) = 0,
/// a quadratic in q^2. The physical branch is
///   q^2 = (m*w/hbar) { [coth^2 + 4i(gamma/w + tau*w)]^(1/2) - coth },
/// evaluated with the principal square root in a cancellation-free form;
/// the second root is exposed alongside. In the classical limit hbar = 0
/// the quadratic degenerates and the single root q^2 = i*w*m*beta*(gamma+tau*w^2)
/// is returned for both branches (degenerate flag set).
struct DispersionSolution {
    double omega = 0.0;
    std::complex<double> q2_physical{0.0, 0.0};
    std::complex<double> q2_secondary{0.0, 0.0};
    std::complex<double> q_plus{0.0, 0.0};  // +sqrt(q2_physical), principal
    std::complex<double> q_minus{0.0, 0.0}; // -sqrt(q2_physical)
    double residual_physical = 0.0;  // relative back-substitution residual
    double residual_secondary = 0.0;
    bool omega_zero = false;         // removable point handled by the limit q^2 = 0
    bool degenerate_classical = false;
};

DispersionSolution dispersion_q2(double omega, const BathParams& params);

} // namespace qbd::analysis
