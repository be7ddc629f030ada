#include "qbd/pde/moments.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace qbd::pde {

MomentFields extract_moments(const PhaseSpaceField& f, const BathParams& params) {
    f.validate();
    params.validate();
    const std::size_t nr = f.nr(), np = f.np;
    const double dp = f.dp();
    MomentFields m;
    m.grid = f.rgrid;
    m.rho.assign(nr, 0.0);
    m.V.assign(nr, 0.0);
    m.Pi.assign(nr, 0.0);
    for (std::size_t j = 0; j < nr; ++j) {
        double s0 = 0.0, s1 = 0.0;
        for (std::size_t i = 0; i < np; ++i) {
            const double v = f.at(i, j);
            s0 += v;
            s1 += f.p(i) * v;
        }
        m.rho[j] = s0 * dp;
        const double flow = s1 * dp / params.m; // rho*V
        m.V[j] = (m.rho[j] > 0.0) ? flow / m.rho[j] : 0.0;
        double s2 = 0.0;
        for (std::size_t i = 0; i < np; ++i)
            s2 += f.p(i) * (f.p(i) / params.m - m.V[j]) * f.at(i, j);
        m.Pi[j] = s2 * dp;
    }
    return m;
}

namespace {

double potential_at(const langevin::Potential& pot, double r) {
    return langevin::potential_energy(pot, std::span<const double>(&r, 1));
}

struct Series {
    std::vector<MomentFields> moments;
    double dt = 0.0;
    SpaceGrid grid;
};

Series build_series(std::span<const PhaseSpaceField> levels, const BathParams& params) {
    if (levels.size() < 3)
        throw std::invalid_argument("residuals: need at least 3 time levels");
    Series s;
    s.grid = levels[0].rgrid;
    s.dt = levels[1].time - levels[0].time;
    if (!(s.dt > 0.0)) throw std::invalid_argument("residuals: levels must advance in time");
    for (const auto& f : levels) s.moments.push_back(extract_moments(f, params));
    return s;
}

} // namespace

double residual_continuity(std::span<const PhaseSpaceField> levels, const BathParams& params) {
    const Series s = build_series(levels, params);
    const std::size_t nr = s.grid.points;
    const double dr = s.grid.spacing();
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < s.moments.size(); ++k) {
        const auto& prev = s.moments[k - 1];
        const auto& cur = s.moments[k];
        const auto& next = s.moments[k + 1];
        const std::size_t j_lo = s.grid.periodic ? 0 : 1;
        const std::size_t j_hi = s.grid.periodic ? nr : nr - 1;
        for (std::size_t j = j_lo; j < j_hi; ++j) {
            const std::size_t jp = (j + 1) % nr;
            const std::size_t jm = (j + nr - 1) % nr;
            const double drho_dt = (next.rho[j] - prev.rho[j]) / (2.0 * s.dt);
            const double div_flow =
                (cur.rho[jp] * cur.V[jp] - cur.rho[jm] * cur.V[jm]) / (2.0 * dr);
            worst = std::max(worst, std::fabs(drho_dt + div_flow));
        }
    }
    return worst;
}

double residual_force_balance(std::span<const PhaseSpaceField> levels,
                              const langevin::Potential& potential, const BathParams& params) {
    const Series s = build_series(levels, params);
    const std::size_t nr = s.grid.points;
    const double dr = s.grid.spacing();
    const double beta = params.beta();

    // equilibrium-weighted discrete force (matches the solver fluxes)
    std::vector<double> Y(nr), psi(nr + 1);
    for (std::size_t j = 0; j < nr; ++j)
        Y[j] = std::exp(-beta * potential_at(potential, s.grid.pos(j)));
    auto psi_face = [&](std::size_t j) { // face between cells j and j+1 (mod nr)
        const std::size_t jp = (j + 1) % nr;
        return std::sqrt(Y[j] * Y[jp]);
    };

    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < s.moments.size(); ++k) {
        const auto& prev = s.moments[k - 1];
        const auto& cur = s.moments[k];
        const auto& next = s.moments[k + 1];
        const std::size_t j_lo = s.grid.periodic ? 0 : 1;
        const std::size_t j_hi = s.grid.periodic ? nr : nr - 1;
        for (std::size_t j = j_lo; j < j_hi; ++j) {
            const std::size_t jp = (j + 1) % nr;
            const std::size_t jm = (j + nr - 1) % nr;
            const double dV_dt = (next.V[j] - prev.V[j]) / (2.0 * s.dt);
            const double adv = cur.V[j] * (cur.V[jp] - cur.V[jm]) / (2.0 * dr);
            const double u_tilde =
                -(1.0 / beta) * (psi_face(j) - psi_face(jm)) / (dr * Y[j]);
            // geometric-mean face pressure; clamp guards roundoff negatives
            const double pi_hi = std::sqrt(std::max(0.0, cur.Pi[j] * cur.Pi[jp]));
            const double pi_lo = std::sqrt(std::max(0.0, cur.Pi[jm] * cur.Pi[j]));
            const double dPi = (pi_hi - pi_lo) / dr;
            const double res = params.m * cur.rho[j] * (dV_dt + adv) +
                               params.m * params.gamma * cur.rho[j] * cur.V[j] +
                               cur.rho[j] * u_tilde + dPi;
            worst = std::max(worst, std::fabs(res));
        }
    }
    return worst;
}

} // namespace qbd::pde
