#include "qbd/analysis/cutoff.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qbd/core/quad.hpp"
#include "qbd/core/roots.hpp"
#include "qbd/core/special.hpp"

namespace qbd::analysis {

double momentum_dispersion_integral(double Omega, const BathParams& params) {
    params.validate();
    if (!(Omega >= 0.0))
        throw std::invalid_argument("momentum_dispersion_integral: Omega must be >= 0");
    if (Omega == 0.0) return 0.0;
    const double bh = 0.5 * params.beta() * params.hbar;
    const double g2 = params.gamma * params.gamma;
    auto integrand = [&](double w) {
        // hbar*w*coth(beta*hbar*w/2) = 2*T*xcoth(beta*hbar*w/2)
        return 2.0 * params.T * xcoth(bh * w) / (w * w + g2);
    };
    // Pre-split at the Lorentzian knee so very large Omega converges fast.
    const double knee = std::min(Omega, 10.0 * params.gamma);
    QuadResult lo = integrate_gk(integrand, 0.0, knee, 0.0, 1e-11);
    QuadResult hi{0.0, 0.0, 0};
    if (Omega > knee) hi = integrate_gk(integrand, knee, Omega, 0.0, 1e-11);
    const double pref = params.d * params.m * params.gamma / std::numbers::pi;
    return pref * (lo.value + hi.value);
}

namespace {

/// Left side of the cutoff equation minus 2*pi, after x = u^2.
double cutoff_residual(double Omega, const BathParams& p) {
    const double c = 0.5 * p.beta() * p.hbar * Omega;
    const double g = p.gamma / Omega;
    const double g2 = g * g;
    auto integrand = [&](double u) {
        // coth(c*u) * 2u = (2/c) * xcoth(c*u); finite at u = 0
        return (2.0 / c) * xcoth(c * u) / (u * u + g2);
    };
    const QuadResult q = integrate_gk(integrand, 0.0, 1.0, 1e-12, 1e-12);
    return p.beta() * p.hbar * p.gamma * q.value - 2.0 * std::numbers::pi;
}

} // namespace

CutoffResult solve_cutoff(const BathParams& params) {
    params.validate();
    if (params.hbar == 0.0)
        throw std::invalid_argument("solve_cutoff: hbar must be > 0 (no finite cutoff in the "
                                    "classical limit)");
    const double omega_geo =
        std::sqrt(2.0 * std::numbers::pi * params.gamma * params.T / params.hbar);
    double lo = 0.01 * omega_geo;
    double hi = 100.0 * omega_geo;
    auto f = [&](double w) { return cutoff_residual(w, params); };
    if (!expand_bracket(f, lo, hi))
        throw std::runtime_error(
            "solve_cutoff: no sign change; residual at bracket ends: f(" +
            std::to_string(lo) + ") = " + std::to_string(f(lo)) + ", f(" +
            std::to_string(hi) + ") = " + std::to_string(f(hi)));

    // Monotonicity guard over the bracket (endpoints and midpoint).
    const double fl = f(lo), fm = f(0.5 * (lo + hi)), fh = f(hi);
    if (!(fl < fm && fm < fh))
        throw std::runtime_error("solve_cutoff: residual is not monotone over the bracket");

    RootResult root = brent(f, lo, hi, 0.0, 1e-15);
    CutoffResult res;
    res.Omega = root.x;
    res.residual = f(root.x);
    res.iterations = root.iterations;
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    if (std::fabs(res.residual) > 1e-10)
        throw std::runtime_error("solve_cutoff: residual " + std::to_string(res.residual) +
                                 " did not reach 1e-10");
    return res;
}

double collision_cutoff(double lambda, const BathParams& params) {
    params.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("collision_cutoff: lambda must be > 0");
    return 2.0 * std::numbers::pi * std::sqrt(params.T / params.m) / lambda;
}

double collision_friction(double lambda, const BathParams& params) {
    params.validate();
    if (!(lambda > 0.0)) throw std::invalid_argument("collision_friction: lambda must be > 0");
    return 2.0 * std::numbers::pi * params.hbar / (params.m * lambda * lambda);
}

} // namespace qbd::analysis
