#include "qbd/analysis/dispersion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qbd/core/special.hpp"

namespace qbd::analysis {

namespace {

double back_substitution_residual(std::complex<double> q2, double A, double B,
                                  std::complex<double> C) {
    const std::complex<double> t1 = A * q2 * q2;
    const std::complex<double> t2 = B * q2;
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(C)});
    if (scale == 0.0) return 0.0;
    return std::abs(t1 + t2 + C) / scale;
}

} // namespace

DispersionSolution dispersion_q2(double omega, const BathParams& params) {
    params.validate();
    DispersionSolution sol;
    sol.omega = omega;
    if (omega == 0.0) {
        // both asymptotic formulas agree on q^2 -> 0; removable point
        sol.omega_zero = true;
        return sol;
    }

    const double gam_eff = params.gamma + params.tau * omega * omega;

    if (params.hbar == 0.0) {
        // Classical symbol: m*gamma_hat*(-i w) = -T q^2  =>  q^2 = i w m beta gamma_hat
        sol.degenerate_classical = true;
        sol.q2_physical = std::complex<double>(0.0, omega * params.m * params.beta() * gam_eff);
        sol.q2_secondary = sol.q2_physical;
        sol.q_plus = std::sqrt(sol.q2_physical);
        sol.q_minus = -sol.q_plus;
        const double B = params.T / params.m; // hbar -> 0 limit of (hbar*w/2m)coth
        const std::complex<double> C(0.0, -omega * gam_eff);
        sol.residual_physical = back_substitution_residual(sol.q2_physical, 0.0, B, C);
        sol.residual_secondary = sol.residual_physical;
        return sol;
    }

    const double coth = coth_stable(0.5 * params.beta() * params.hbar * omega);
    const std::complex<double> wq(coth * coth, 4.0 * (params.gamma / omega + params.tau * omega));
    const std::complex<double> root = std::sqrt(wq); // principal branch
    const double pref = params.m * omega / params.hbar;
    // (root - coth) rewritten as (wq - coth^2)/(root + coth): no cancellation
    // when coth is large (small beta*hbar*omega)
    const std::complex<double> diff = (wq - coth * coth) / (root + coth);
    sol.q2_physical = pref * diff;
    sol.q2_secondary = -pref * (root + coth);
    sol.q_plus = std::sqrt(sol.q2_physical);
    sol.q_minus = -sol.q_plus;

    const double A = params.hbar / (2.0 * params.m) * (params.hbar / (2.0 * params.m));
    const double B = params.hbar * omega / (2.0 * params.m) * coth;
    const std::complex<double> C(0.0, -omega * gam_eff);
    sol.residual_physical = back_substitution_residual(sol.q2_physical, A, B, C);
    sol.residual_secondary = back_substitution_residual(sol.q2_secondary, A, B, C);
    if (sol.residual_physical > 1e-8)
        throw std::runtime_error("dispersion_q2: branch selection failed, residual " +
                                 std::to_string(sol.residual_physical));
    return sol;
}

} // namespace qbd::analysis
