#include "qbd/pde/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qbd::pde {

namespace {

using cplx = std::complex<double>;

/// Roots of c3 x^3 + c2 x^2 + c1 x + c0 with real coefficients; degenerate
/// leading coefficients reduce the degree. Closed forms plus a Newton
/// polish on each root.
std::vector<cplx> poly_roots(double c3, double c2, double c1, double c0) {
    std::vector<cplx> roots;
    if (c3 == 0.0 && c2 == 0.0) {
        if (c1 == 0.0) throw std::invalid_argument("poly_roots: degree zero");
        roots.push_back(cplx(-c0 / c1, 0.0));
        return roots;
    }
    if (c3 == 0.0) {
        const cplx disc = std::sqrt(cplx(c1 * c1 - 4.0 * c2 * c0, 0.0));
        // Citardauq-style pairing avoids cancellation for small roots.
        const cplx qq = -0.5 * (c1 + (c1 >= 0.0 ? 1.0 : -1.0) * disc);
        roots.push_back(qq / c2);
        roots.push_back((qq != 0.0) ? c0 / qq : cplx(0.0, 0.0));
    } else {
        // depressed cubic: x = y - a/3 with monic x^3 + a x^2 + b x + c
        const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
        const double p = b - a * a / 3.0;
        const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        const cplx inner = std::sqrt(cplx(q * q / 4.0 + p * p * p / 27.0, 0.0));
        cplx u3 = -0.5 * q + inner;
        if (std::abs(u3) < 1e-300) u3 = -0.5 * q - inner;
        const cplx u = std::pow(u3, 1.0 / 3.0);
        const cplx w(-0.5, 0.5 * std::sqrt(3.0)); // primitive cube root of unity
        for (int k = 0; k < 3; ++k) {
            const cplx uk = u * std::pow(w, k);
            const cplx y = (std::abs(uk) > 0.0) ? uk - p / (3.0 * uk) : cplx(0.0, 0.0);
            roots.push_back(y - a / 3.0);
        }
    }
    auto value = [&](cplx x) { return ((c3 * x + c2) * x + c1) * x + c0; };
    auto deriv = [&](cplx x) { return (3.0 * c3 * x + 2.0 * c2) * x + c1; };
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            const cplx d = deriv(r);
            if (std::abs(d) == 0.0) break;
            r -= value(r) / d;
        }
        if (std::fabs(r.imag()) < 1e-12 * std::max(1.0, std::fabs(r.real())))
            r = cplx(r.real(), 0.0);
    }
    return roots;
}

std::vector<cplx> mode_roots(double q, const BathParams& p, double hbar, double tau) {
    const double c3 = p.m * tau;
    const double c2 = p.T * p.beta() * p.beta() * hbar * hbar * q * q / 12.0;
    const double c1 = -p.m * p.gamma;
    const double c0 = -p.T * q * q;
    return poly_roots(c3, c2, c1, c0);
}

} // namespace

ModeDecay free_mode_evolution(double q, const BathParams& params, ModeOrder order) {
    params.validate();
    ModeDecay out;
    out.q = q;

    const cplx s_classical(-params.T * q * q / (params.m * params.gamma), 0.0);
    if (order == ModeOrder::Classical ||
        (params.hbar == 0.0 && params.tau == 0.0)) {
        out.roots = {s_classical};
        out.physical = s_classical;
        return out;
    }

    // Homotopy in (hbar, tau): follow the root nearest to the tracked one
    // as the quantum and radiative terms are switched on in 16 steps. The
    // cubic carries fast radiative roots (runaway analogs) that must not be
    // confused with the diffusive branch.
    cplx tracked = s_classical;
    constexpr int kSteps = 16;
    for (int k = 1; k <= kSteps; ++k) {
        const double t = static_cast<double>(k) / kSteps;
        const auto roots = mode_roots(q, params, t * params.hbar, t * params.tau);
        double best = std::numeric_limits<double>::infinity();
        cplx pick = tracked;
        for (const auto& r : roots) {
            const double dist = std::abs(r - tracked);
            if (dist < best) {
                best = dist;
                pick = r;
            }
        }
        tracked = pick;
        if (k == kSteps) out.roots = roots;
    }
    out.physical = tracked;

    // When tau*s_cl^2 > gamma the diffusive branch crosses the radiative
    // pair along the homotopy path and step tracking can land on the wrong
    // branch (at T* the crossing is exact). The damped root closest to the
    // classical rate is the physical one wherever continuation is defined,
    // and stays well defined across those crossings.
    {
        double best = std::numeric_limits<double>::infinity();
        cplx pick = out.physical;
        for (const auto& r : out.roots) {
            if (r.real() > 0.0) continue;
            const double dist = std::abs(r - s_classical);
            if (dist < best) {
                best = dist;
                pick = r;
            }
        }
        if (best < std::numeric_limits<double>::infinity()) out.physical = pick;
    }

    for (const auto& r : out.roots) {
        if (r.real() > 0.0) out.has_unstable = true;
    }
    out.unstable = std::none_of(out.roots.begin(), out.roots.end(),
                                [](const cplx& r) { return r.real() <= 0.0; });
    return out;
}

} // namespace qbd::pde
