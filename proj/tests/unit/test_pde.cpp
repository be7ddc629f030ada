#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qbd/operators/bohm.hpp"
#include "qbd/pde/fields.hpp"
#include "qbd/pde/kramers.hpp"
#include "qbd/pde/modes.hpp"
#include "qbd/pde/moments.hpp"
#include "qbd/pde/smoluchowski.hpp"
#include "support/oracles.hpp"

using namespace qbd;
using namespace qbd::pde;
using qbd::langevin::DoubleWell;
using qbd::langevin::Free;
using qbd::langevin::Harmonic;
using qbd::langevin::Potential;

namespace {

BathParams base_params() {
    BathParams p;
    p.m = 1.0;
    p.gamma = 1.0;
    p.T = 1.0;
    p.hbar = 0.0;
    p.d = 1;
    return p;
}

DensityField cosine_density(const SpaceGrid& grid, double q, double eps) {
    DensityField rho;
    rho.grid = grid;
    rho.rho.resize(grid.points);
    for (std::size_t j = 0; j < grid.points; ++j)
        rho.rho[j] = (1.0 + eps * std::cos(q * grid.pos(j))) / grid.length;
    return rho;
}

double project_cos(const DensityField& f, double q) {
    double a = 0.0;
    for (std::size_t j = 0; j < f.grid.points; ++j)
        a += f.rho[j] * std::cos(q * f.grid.pos(j));
    return a * 2.0 * f.grid.spacing();
}

double fitted_decay_rate(const SmoluchowskiResult& res, double q) {
    std::vector<double> ts, la;
    for (const auto& s : res.snapshots) {
        const double a = project_cos(s, q);
        if (a > 0.0) {
            ts.push_back(s.time);
            la.push_back(std::log(a));
        }
    }
    REQUIRE(ts.size() >= 5);
    return oracle::fit_slope(ts, la);
}

} // namespace

TEST_CASE("extract_moments: equilibrium ideal-gas structure") {
    auto p = base_params();
    const SpaceGrid grid{16.0, 96, false};
    const Potential pot = Harmonic{1.0, {0, 0, 0}};
    auto f = maxwell_boltzmann(grid, 97, 7.0, pot, p);
    auto m = extract_moments(f, p);

    double kinetic = 0.0;
    for (std::size_t j = 0; j < grid.points; ++j) {
        CHECK(std::fabs(m.V[j]) < 1e-12);                        // no flow
        CHECK(std::fabs(m.Pi[j] - p.T * m.rho[j]) <= 1e-8 * m.rho[j] + 1e-14);
        kinetic += 0.5 * m.Pi[j] * grid.spacing();
    }
    CHECK(kinetic == doctest::Approx(0.5 * p.T).epsilon(1e-8)); // d*T/2 with d = 1
}

TEST_CASE("extract_moments: galilean shift gives uniform V = p0/m") {
    auto p = base_params();
    p.m = 1.7;
    const SpaceGrid grid{12.0, 64, true};
    auto f = maxwell_boltzmann(grid, 97, 7.0 * std::sqrt(p.m * p.T), Free{}, p);
    const double p0 = 3.0 * f.dp(); // shift by an integer number of p cells
    PhaseSpaceField shifted = f;
    for (std::size_t i = 0; i < f.np; ++i)
        for (std::size_t j = 0; j < f.nr(); ++j)
            shifted.at(i, j) = (i >= 3) ? f.at(i - 3, j) : 0.0;
    auto m = extract_moments(shifted, p);
    for (std::size_t j = 0; j < grid.points; ++j)
        CHECK(m.V[j] == doctest::Approx(p0 / p.m).epsilon(1e-9));
}

TEST_CASE("kramers: Maxwell-Boltzmann is stationary, corrections on and off") {
    auto p = base_params();
    p.hbar = 1.0;
    p.tau = 0.02;
    const SpaceGrid grid{16.0, 96, false};
    const Potential pot = Harmonic{1.0, {0, 0, 0}};
    auto f0 = maxwell_boltzmann(grid, 97, 7.0, pot, p);

    for (const bool quantum : {false, true}) {
        KramersOptions opts;
        opts.quantum_correction = quantum;
        opts.radiation_correction = quantum;
        auto res = solve_kramers(f0, pot, p, 0.5, opts);
        CHECK(res.diag.max_step_change < 1e-8); // residual per step, max norm
        CHECK(res.diag.min_value >= -1e-12);
        CHECK(std::fabs(res.diag.mass_final - res.diag.mass_initial) < 1e-12);
    }
}

TEST_CASE("kramers: momentum width relaxes at rate 2*gamma") {
    auto p = base_params();
    const SpaceGrid grid{8.0, 16, true}; // free particle, r is passive
    const double p_max = 7.5;
    const std::size_t np = 151;
    PhaseSpaceField f0;
    f0.rgrid = grid;
    f0.np = np;
    f0.p_max = p_max;
    f0.f.resize(np * grid.points);
    const double sig2 = 1.5 * p.m * p.T; // wider than equilibrium
    for (std::size_t i = 0; i < np; ++i) {
        const double pv = f0.p(i);
        for (std::size_t j = 0; j < grid.points; ++j)
            f0.at(i, j) = std::exp(-0.5 * pv * pv / sig2);
    }
    f0.normalize();

    KramersOptions opts;
    opts.dt = 1e-3;
    opts.save_every = 100;
    auto res = solve_kramers(f0, Free{}, p, 1.5, opts);

    // ODE oracle: d<p^2>/dt = -2 gamma (<p^2> - m T)
    std::vector<double> ts, lx;
    for (const auto& snap : res.snapshots) {
        double s2 = 0.0, s0 = 0.0;
        for (std::size_t i = 0; i < np; ++i)
            for (std::size_t j = 0; j < snap.nr(); ++j) {
                s2 += snap.p(i) * snap.p(i) * snap.at(i, j);
                s0 += snap.at(i, j);
            }
        const double p2 = s2 / s0;
        ts.push_back(snap.time);
        lx.push_back(std::log(p2 - p.m * p.T));
    }
    const double rate = oracle::fit_slope(ts, lx);
    CHECK(std::fabs(rate + 2.0 * p.gamma) < 0.02 * 2.0 * p.gamma);
}

TEST_CASE("kramers marginal approaches smoluchowski as friction grows") {
    auto p = base_params();
    const double k = 1.0;
    const SpaceGrid grid{16.0, 192, false};
    const Potential pot = Harmonic{k, {0, 0, 0}};

    // common off-equilibrium start: displaced thermal blob
    DensityField rho0;
    rho0.grid = grid;
    rho0.rho.resize(grid.points);
    for (std::size_t j = 0; j < grid.points; ++j) {
        const double r = grid.pos(j) - 1.0;
        rho0.rho[j] = std::exp(-0.5 * r * r / (p.T / k));
    }
    rho0.normalize();

    double prev_l1 = 2.0;
    // compare both solvers at the same fraction of the positional relaxation
    // time m*gamma/k (factor-8 sweep in gamma)
    for (const double gamma : {1.0, 2.0, 4.0, 8.0}) {
        BathParams pg = p;
        pg.gamma = gamma;
        const double t_end = 0.5 * pg.m * gamma / k;

        PhaseSpaceField f0;
        f0.rgrid = grid;
        f0.np = 97;
        f0.p_max = 7.0;
        f0.f.resize(f0.np * grid.points);
        for (std::size_t i = 0; i < f0.np; ++i) {
            const double pv = f0.p(i);
            const double xp = std::exp(-0.5 * pv * pv / (pg.m * pg.T));
            for (std::size_t j = 0; j < grid.points; ++j)
                f0.at(i, j) = xp * rho0.rho[j];
        }
        f0.normalize();

        KramersOptions ko;
        ko.dt = 0.0019;
        auto kr = solve_kramers(f0, pot, pg, t_end, ko);
        SmoluchowskiOptions so;
        so.dt = 1e-3;
        auto sm = solve_smoluchowski(rho0, pot, pg, t_end, so);

        const auto& fK = kr.snapshots.back();
        const auto& rS = sm.snapshots.back();
        double l1 = 0.0;
        const double dp = fK.dp();
        for (std::size_t j = 0; j < grid.points; ++j) {
            double marg = 0.0;
            for (std::size_t i = 0; i < fK.np; ++i) marg += fK.at(i, j);
            l1 += std::fabs(marg * dp - rS.rho[j]) * grid.spacing();
        }
        CHECK(l1 < prev_l1); // monotone in gamma
        if (gamma >= 4.0) CHECK(l1 < 0.03); // strong friction
        prev_l1 = l1;
    }
}

TEST_CASE("smoluchowski: Boltzmann steady state to 1e-6, all correction flags") {
    auto p = base_params();
    p.hbar = 0.8;
    p.tau = 0.05;
    const SpaceGrid grid{14.0, 112, false};
    std::vector<Potential> pots;
    pots.push_back(Harmonic{1.0, {0, 0, 0}});
    pots.push_back(DoubleWell{1.0, 1.5});

    for (const auto& pot : pots) {
        // start hotter than the bath
        DensityField rho0;
        rho0.grid = grid;
        rho0.rho.resize(grid.points);
        for (std::size_t j = 0; j < grid.points; ++j) {
            const double r = grid.pos(j);
            rho0.rho[j] =
                std::exp(-0.5 / p.T *
                         langevin::potential_energy(pot, std::span<const double>(&r, 1)));
        }
        rho0.normalize();

        for (const bool corr : {false, true}) {
            SmoluchowskiOptions opts;
            opts.quantum_correction = corr;
            opts.radiation_correction = corr;
            auto res = solve_smoluchowski(rho0, pot, p, 60.0, opts);

            // discrete Boltzmann target
            std::vector<double> target(grid.points);
            double mass = 0.0;
            for (std::size_t j = 0; j < grid.points; ++j) {
                const double r = grid.pos(j);
                target[j] = std::exp(
                    -p.beta() * langevin::potential_energy(pot, std::span<const double>(&r, 1)));
                mass += target[j] * grid.spacing();
            }
            double linf = 0.0, scale = 0.0;
            for (std::size_t j = 0; j < grid.points; ++j) {
                target[j] /= mass;
                linf = std::max(linf, std::fabs(res.snapshots.back().rho[j] - target[j]));
                scale = std::max(scale, target[j]);
            }
            CHECK(linf / scale < 1e-6);
            CHECK(res.diag.min_value >= -1e-12);
        }
    }
}

TEST_CASE("smoluchowski: free gaussian spreads with variance 2 D t") {
    auto p = base_params();
    p.gamma = 2.0;
    const double D = p.T / (p.m * p.gamma);
    const SpaceGrid grid{40.0, 512, true};
    DensityField rho0;
    rho0.grid = grid;
    rho0.rho.resize(grid.points);
    const double s0 = 1.0;
    for (std::size_t j = 0; j < grid.points; ++j) {
        const double r = grid.pos(j);
        rho0.rho[j] = std::exp(-0.5 * r * r / (s0 * s0));
    }
    rho0.normalize();

    SmoluchowskiOptions opts;
    opts.dt = 2e-3;
    auto res = solve_smoluchowski(rho0, Free{}, p, 6.0, opts);
    auto variance = [&](const DensityField& f) {
        double v = 0.0;
        for (std::size_t j = 0; j < grid.points; ++j)
            v += f.rho[j] * grid.pos(j) * grid.pos(j) * grid.spacing();
        return v;
    };
    const double grown = variance(res.snapshots.back()) - variance(res.snapshots.front());
    CHECK(std::fabs(grown - 2.0 * D * 6.0) / (2.0 * D * 6.0) < 0.005);
}

TEST_CASE("smoluchowski quantum-corrected mode decay matches the root oracle") {
    auto p = base_params();
    const SpaceGrid grid{2.0 * std::numbers::pi * 8.0, 512, true};
    const double q = 4.0 * 2.0 * std::numbers::pi / grid.length; // q = 0.5, q*dr ~ 0.05
    const double s_cl = -p.T * q * q / (p.m * p.gamma);
    p.hbar = 0.6 / std::fabs(s_cl); // beta*hbar*|s_cl| = 0.6, ~3% rate shift

    auto root = free_mode_evolution(q, p, ModeOrder::Semiclassical);
    REQUIRE(root.physical.imag() == 0.0);
    REQUIRE(std::fabs(root.physical.real() / s_cl - 1.0) > 0.02); // shift is resolvable

    auto rho0 = cosine_density(grid, q, 0.1);
    SmoluchowskiOptions opts;
    opts.quantum_correction = true;
    opts.dt = 1e-3 / std::fabs(s_cl);
    opts.save_every = 50;
    auto res = solve_smoluchowski(rho0, Free{}, p, 1.0 / std::fabs(s_cl), opts);
    const double rate = fitted_decay_rate(res, q);
    CHECK(std::fabs(rate / root.physical.real() - 1.0) < 0.01);
}

TEST_CASE("free_mode_evolution: classical and perturbative roots") {
    auto p = base_params();
    const double q = 0.8;
    const double s_cl = -p.T * q * q / (p.m * p.gamma);

    auto classical = free_mode_evolution(q, p, ModeOrder::Classical);
    CHECK(classical.physical.real() == doctest::Approx(s_cl).epsilon(1e-14));
    CHECK(classical.roots.size() == 1);

    // tau = 0: quadratic; compare with the closed form
    p.hbar = 0.9;
    auto quad = free_mode_evolution(q, p, ModeOrder::Semiclassical);
    const double a = p.T * p.beta() * p.beta() * p.hbar * p.hbar * q * q / 12.0;
    const double s_exact =
        (p.m * p.gamma - std::sqrt(p.m * p.m * p.gamma * p.gamma +
                                   4.0 * a * p.T * q * q)) /
        (2.0 * a);
    CHECK(quad.physical.real() == doctest::Approx(s_exact).epsilon(1e-12));
    // small-hbar perturbation of the quadratic term
    p.hbar = 0.05;
    auto tiny = free_mode_evolution(q, p, ModeOrder::Semiclassical);
    const double shift = (p.beta() * p.hbar * s_cl) * (p.beta() * p.hbar * s_cl) / 12.0;
    CHECK(tiny.physical.real() ==
          doctest::Approx(s_cl * (1.0 - shift)).epsilon(1e-6));

    CHECK(free_mode_evolution(0.0, base_params(), ModeOrder::Semiclassical).physical ==
          std::complex<double>(0.0, 0.0));
}

TEST_CASE("free_mode_evolution: special temperature factors out the classical root") {
    BathParams p = base_params();
    p.tau = 0.03;
    p.hbar = 1.2;
    p.T = 0.5 * p.hbar * std::sqrt(p.gamma / (3.0 * p.tau)); // T*
    // defining identity tau/gamma = beta^2 hbar^2 / 12
    CHECK(p.tau / p.gamma ==
          doctest::Approx(p.beta() * p.beta() * p.hbar * p.hbar / 12.0).epsilon(1e-14));

    for (double q : {0.1, 0.7, 2.0, 5.0}) {
        auto mode = free_mode_evolution(q, p, ModeOrder::Semiclassical);
        const double s_cl = -p.T * q * q / (p.m * p.gamma);
        CHECK(std::fabs(mode.physical.real() - s_cl) <= 1e-8 * std::fabs(s_cl));
        CHECK(std::fabs(mode.physical.imag()) <= 1e-10 * std::fabs(s_cl));
        // radiative runaway pair +-sqrt(gamma/tau) is present and flagged
        CHECK(mode.roots.size() == 3);
        CHECK(mode.has_unstable);
        CHECK(!mode.unstable);
        bool found_runaway = false;
        for (const auto& r : mode.roots)
            if (std::fabs(r.real() - std::sqrt(p.gamma / p.tau)) <
                1e-6 * std::sqrt(p.gamma / p.tau))
                found_runaway = true;
        CHECK(found_runaway);
    }
}

TEST_CASE("quantum smoluchowski: hbar = 0 coincides with the baseline") {
    auto p = base_params();
    const SpaceGrid grid{12.0, 128, true};
    auto rho0 = cosine_density(grid, 2.0 * std::numbers::pi / grid.length * 3.0, 0.4);
    SmoluchowskiOptions opts;
    opts.dt = 5e-3;
    auto a = solve_smoluchowski(rho0, Free{}, p, 1.0, opts);
    auto b = solve_smoluchowski_quantum(rho0, Free{}, p, 1.0, opts);
    REQUIRE(a.snapshots.size() == b.snapshots.size());
    for (std::size_t j = 0; j < grid.points; ++j)
        CHECK(std::fabs(a.snapshots.back().rho[j] - b.snapshots.back().rho[j]) < 1e-12);
}

TEST_CASE("quantum smoluchowski: bohm flux linearizes to the fourth derivative") {
    auto p = base_params();
    p.hbar = 1.0;
    const SpaceGrid grid{2.0 * std::numbers::pi * 8.0, 512, true};
    const std::size_t m = grid.points;
    const double dr = grid.spacing();
    const double q = 4.0 * 2.0 * std::numbers::pi / grid.length;
    const double eps = 1e-3;
    auto rho = cosine_density(grid, q, eps);

    // nonlinear Bohm flux divergence, exactly as the solver assembles it
    const auto Q = ops::bohm_potential(rho, p);
    std::vector<double> nonlinear(m);
    auto face = [&](std::size_t j) {
        const std::size_t jp = (j + 1) % m;
        return 0.5 * (rho.rho[j] + rho.rho[jp]) * (Q.values[jp] - Q.values[j]) / dr;
    };
    for (std::size_t j = 0; j < m; ++j)
        nonlinear[j] = (face(j) - face((j + m - 1) % m)) / dr;

    // linearized reference -hbar^2/(4m) d4(rho)/dr4 with the composed stencil
    std::vector<double> lap(m), linear(m);
    auto d2 = [&](const std::vector<double>& v, std::size_t j) {
        const std::size_t jp = (j + 1) % m, jm = (j + m - 1) % m;
        return (v[jp] - 2.0 * v[j] + v[jm]) / (dr * dr);
    };
    for (std::size_t j = 0; j < m; ++j) lap[j] = d2(rho.rho, j);
    for (std::size_t j = 0; j < m; ++j)
        linear[j] = -p.hbar * p.hbar / (4.0 * p.m) * d2(lap, j);

    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        num += (nonlinear[j] - linear[j]) * (nonlinear[j] - linear[j]);
        den += linear[j] * linear[j];
    }
    CHECK(std::sqrt(num / den) < 0.01);
}

TEST_CASE("quantum smoluchowski: uniform density is steady; modes decay faster") {
    auto p = base_params();
    p.hbar = 1.5;
    const SpaceGrid grid{2.0 * std::numbers::pi * 4.0, 256, true};
    const double q = 3.0 * 2.0 * std::numbers::pi / grid.length;

    DensityField uniform;
    uniform.grid = grid;
    uniform.rho.assign(grid.points, 1.0 / grid.length);
    auto steady = solve_smoluchowski_quantum(uniform, Free{}, p, 0.5, {});
    CHECK(steady.diag.max_step_change < 1e-14);

    auto rho0 = cosine_density(grid, q, 0.05);
    SmoluchowskiOptions opts;
    opts.save_every = 25;
    auto res = solve_smoluchowski_quantum(rho0, Free{}, p, 0.4, opts);
    const double rate = fitted_decay_rate(res, q);
    const double s_cl = -p.T * q * q / (p.m * p.gamma);
    // Bohm pressure adds -hbar^2 q^4 / (4 m^2 gamma) to the decay rate
    const double s_q = s_cl - p.hbar * p.hbar * q * q * q * q / (4.0 * p.m * p.m * p.gamma);
    CHECK(std::fabs(rate / s_q - 1.0) < 0.02);
    CHECK(rate < s_cl);
}

TEST_CASE("moment-equation residuals: equilibrium, solver output, negative control") {
    auto p = base_params();
    const SpaceGrid grid{16.0, 96, false};
    const Potential pot = Harmonic{1.0, {0, 0, 0}};
    auto mb = maxwell_boltzmann(grid, 97, 7.0, pot, p);

    // stationary fields satisfy both balances to near machine precision
    {
        std::vector<PhaseSpaceField> levels(3, mb);
        levels[0].time = 0.0;
        levels[1].time = 0.1;
        levels[2].time = 0.2;
        CHECK(residual_continuity(levels, p) < 1e-8);
        CHECK(residual_force_balance(levels, pot, p) < 1e-8);
    }

    // manufactured violation: mass pumped in with no flow
    {
        std::vector<PhaseSpaceField> levels(3, mb);
        levels[0].time = 0.0;
        levels[1].time = 0.1;
        levels[2].time = 0.2;
        for (auto& v : levels[2].f) v *= 1.5;
        CHECK(residual_continuity(levels, p) > 1e-3);
    }

    // solver output: residual bounded by the convergence-study truncation
    auto run_residual = [&](std::size_t nr, std::size_t np, double dt) {
        const SpaceGrid g{16.0, nr, false};
        BathParams pp = p;
        PhaseSpaceField init;
        init.rgrid = g;
        init.np = np;
        init.p_max = 7.0;
        init.f.resize(np * g.points);
        for (std::size_t i = 0; i < init.np; ++i)
            for (std::size_t j = 0; j < init.nr(); ++j) {
                const double r = g.pos(j) - 0.8;
                const double pv = init.p(i);
                init.at(i, j) = std::exp(-0.5 * pv * pv) * std::exp(-0.5 * r * r);
            }
        init.normalize();
        KramersOptions opts;
        opts.dt = dt;
        opts.save_every = 25;
        auto res = solve_kramers(init, pot, pp, 1.0, opts);
        REQUIRE(res.snapshots.size() >= 3);
        std::vector<PhaseSpaceField> levels(res.snapshots.end() - 3, res.snapshots.end());
        return residual_continuity(levels, pp);
    };
    const double r_coarse = run_residual(64, 65, 4e-3);
    const double r_fine = run_residual(128, 129, 2e-3);
    CHECK(r_fine < r_coarse); // converging
    const double truncation_estimate = (4.0 / 3.0) * std::fabs(r_coarse - r_fine);
    CHECK(r_coarse < 10.0 * truncation_estimate + 1e-12);
}

TEST_CASE("mass conservation over 1000 steps and positivity") {
    auto p = base_params();
    const SpaceGrid grid{2.0 * std::numbers::pi * 4.0, 128, true};
    auto rho0 = cosine_density(grid, 2.0 * std::numbers::pi / grid.length * 2.0, 0.5);
    SmoluchowskiOptions opts;
    opts.dt = 1e-3;
    auto res = solve_smoluchowski(rho0, Free{}, p, 1.0, opts); // 1000 steps
    CHECK(res.diag.steps == 1000);
    CHECK(std::fabs(res.diag.mass_final - res.diag.mass_initial) < 1e-12);
    CHECK(res.diag.min_value >= -1e-12);
}

TEST_CASE("kramers rejects an undersized momentum grid") {
    auto p = base_params();
    const SpaceGrid grid{8.0, 32, true};
    auto f0 = maxwell_boltzmann(grid, 61, 5.0, Free{}, p); // p_max < 6 sqrt(mT)
    CHECK_THROWS_AS((void)solve_kramers(f0, Free{}, p, 0.1, {}), std::invalid_argument);
}
