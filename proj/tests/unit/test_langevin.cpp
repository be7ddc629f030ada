#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qbd/analysis/cutoff.hpp"
#include "qbd/core/fft.hpp"
#include "qbd/langevin/ensemble.hpp"
#include "qbd/langevin/integrate.hpp"
#include "qbd/noise/noise.hpp"
#include "support/oracles.hpp"

using namespace qbd;
using namespace qbd::langevin;

namespace {

BathParams classical_params() {
    BathParams p;
    p.m = 1.0;
    p.gamma = 1.0;
    p.T = 1.0;
    p.hbar = 0.0;
    p.d = 1;
    return p;
}

/// a force trajectory with prescribed samples, for deterministic forcing
noise::NoiseTrajectory manual_force(const TimeGrid& grid, const BathParams& p,
                                    std::vector<std::vector<double>> samples) {
    noise::NoiseTrajectory f;
    f.grid = grid;
    f.params = p;
    f.samples = std::move(samples);
    return f;
}

noise::NoiseTrajectory zero_force(const TimeGrid& grid, const BathParams& p) {
    return manual_force(grid, p,
                        std::vector<std::vector<double>>(
                            static_cast<std::size_t>(p.d), std::vector<double>(grid.n, 0.0)));
}

} // namespace

TEST_CASE("potential energies and gradients agree with finite differences") {
    const double h = 1e-6;
    std::vector<Potential> pots;
    pots.push_back(Harmonic{1.7, {0.2, 0.0, 0.0}});
    pots.push_back(DoubleWell{0.9, 1.4});
    {
        Tabulated t;
        t.grid = SpaceGrid{10.0, 101, false};
        t.values.resize(101);
        for (std::size_t j = 0; j < 101; ++j) {
            const double r = t.grid.pos(j);
            t.values[j] = std::sin(0.8 * r) + 0.1 * r * r;
        }
        t.order = 3;
        pots.push_back(std::move(t));
    }
    for (const auto& pot : pots) {
        for (double r0 : {-2.3, -0.4, 0.9, 3.1}) {
            double grad = 0.0;
            potential_gradient(pot, std::span<const double>(&r0, 1), std::span<double>(&grad, 1));
            const double rp = r0 + h, rm = r0 - h;
            const double fd = (potential_energy(pot, std::span<const double>(&rp, 1)) -
                               potential_energy(pot, std::span<const double>(&rm, 1))) /
                              (2.0 * h);
            CHECK(std::fabs(grad - fd) <= 1e-6 * std::max(1.0, std::fabs(fd)));
        }
    }
}

TEST_CASE("free damped motion matches the exact exponential") {
    auto p = classical_params();
    const double dt = 1e-3;
    const double t_end = 5.0 / p.gamma;
    TimeGrid grid{0.0, dt, static_cast<std::size_t>(t_end / dt) + 1};
    const double p0 = 2.0, r0 = 0.0;
    auto traj = integrate(Free{}, p, grid, zero_force(grid, p),
                          std::span<const double>(&r0, 1), std::span<const double>(&p0, 1));
    const std::size_t last = grid.n - 1;
    const double expect = p0 * std::exp(-p.gamma * grid.time(last));
    CHECK(std::fabs(traj.P[0][last] - expect) / expect < 1e-6);
}

TEST_CASE("undamped harmonic motion conserves energy over 100 periods") {
    BathParams p = classical_params();
    // gamma must stay positive for the type contract; make damping negligible
    p.gamma = 1e-9;
    const double k = 1.0;
    const double w0 = std::sqrt(k / p.m);
    const double dt = 1.5e-3 / w0;
    const double t_end = 100.0 * 2.0 * std::numbers::pi / w0;
    TimeGrid grid{0.0, dt, static_cast<std::size_t>(t_end / dt) + 1};
    const double r0 = 1.0, p0 = 0.0;
    auto traj = integrate(Harmonic{k, {0, 0, 0}}, p, grid, zero_force(grid, p),
                          std::span<const double>(&r0, 1), std::span<const double>(&p0, 1));
    const double e0 = 0.5 * k * r0 * r0;
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.n; j += 100) {
        const double e = 0.5 * traj.P[0][j] * traj.P[0][j] / p.m +
                         0.5 * k * traj.R[0][j] * traj.R[0][j];
        worst = std::max(worst, std::fabs(e - e0) / e0);
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("constant force reaches the exact terminal momentum") {
    auto p = classical_params();
    const double F0 = 1.3;
    const double dt = 5e-3;
    TimeGrid grid{0.0, dt, 8192}; // ~40/gamma
    auto force = manual_force(grid, p, {std::vector<double>(grid.n, F0)});
    const double z = 0.0;
    auto traj = integrate(Free{}, p, grid, force, std::span<const double>(&z, 1),
                          std::span<const double>(&z, 1));
    CHECK(std::fabs(traj.P[0][grid.n - 1] - F0 / p.gamma) < 1e-6);
}

TEST_CASE("heun convergence: halving dt gains ~4x on smooth forcing") {
    auto p = classical_params();
    const double t_end = 4.0;
    auto run = [&](double dt) {
        TimeGrid grid{0.0, dt, static_cast<std::size_t>(std::llround(t_end / dt)) + 1};
        std::vector<double> f(grid.n);
        for (std::size_t j = 0; j < grid.n; ++j) f[j] = std::sin(1.7 * grid.time(j));
        auto force = manual_force(grid, p, {std::move(f)});
        const double z = 0.0;
        auto traj = integrate(Harmonic{0.8, {0, 0, 0}}, p, grid, force,
                              std::span<const double>(&z, 1), std::span<const double>(&z, 1));
        return std::pair{traj.R[0][grid.n - 1], traj.P[0][grid.n - 1]};
    };
    const auto ref = run(0.0005);
    const auto coarse = run(0.004);
    const auto fine = run(0.002);
    const double e_coarse = std::hypot(coarse.first - ref.first, coarse.second - ref.second);
    const double e_fine = std::hypot(fine.first - ref.first, fine.second - ref.second);
    const double order = e_coarse / e_fine;
    CHECK(order > 3.3);
    CHECK(order < 4.7);
}

TEST_CASE("integrator rejects unstable steps with a suggested dt") {
    auto p = classical_params();
    TimeGrid coarse{0.0, 0.2, 64};
    CHECK_THROWS_WITH_AS(
        (void)integrate(Free{}, p, coarse, zero_force(coarse, p), std::vector<double>{0.0},
                        std::vector<double>{0.0}),
        doctest::Contains("dt"), std::invalid_argument);
    TimeGrid ok{0.0, 0.05, 64};
    CHECK_THROWS_AS((void)integrate(Harmonic{1e4, {0, 0, 0}}, p, ok, zero_force(ok, p),
                                    std::vector<double>{0.0}, std::vector<double>{0.0}),
                    std::invalid_argument);
}

TEST_CASE("trajectories are deterministic") {
    auto p = classical_params();
    TimeGrid grid{0.0, 0.01, 2048};
    auto f = noise::sample_noise(grid, p, grid.nyquist(), 99, 1);
    const double z = 0.0;
    auto a = integrate(Free{}, p, grid, f, std::span<const double>(&z, 1),
                       std::span<const double>(&z, 1));
    auto b = integrate(Free{}, p, grid, f, std::span<const double>(&z, 1),
                       std::span<const double>(&z, 1));
    for (std::size_t j = 0; j < grid.n; ++j) {
        CHECK(a.R[0][j] == b.R[0][j]);
        CHECK(a.P[0][j] == b.P[0][j]);
    }
}

// Windows must be long compared to 1/gamma: the zero-mean construction drops
// the dc bin, a finite-window deficit of 2*m*T/(gamma*T_window) per component.
TEST_CASE("classical free ensemble satisfies equipartition") {
    BathParams p = classical_params();
    p.d = 2;
    TimeGrid grid{0.0, 0.0025, 524288}; // 1310/gamma
    EnsembleOptions opts;
    opts.realizations = 32;
    opts.threads = 8;
    auto stats = run_ensemble(Free{}, p, grid, grid.nyquist(), 1, opts);
    auto [p2, err] = momentum_dispersion_empirical(stats);
    const double expect = p.d * p.m * p.T;
    CHECK(std::fabs(p2 - expect) < 3.0 * err);
    CHECK(err < 0.02 * expect);
}

TEST_CASE("quantum ensemble with the solved cutoff restores equipartition") {
    BathParams p = classical_params();
    p.hbar = 1.0; // theta = 1
    const double omega = analysis::solve_cutoff(p).Omega;
    TimeGrid grid{0.0, 0.005, 131072};
    EnsembleOptions opts;
    opts.realizations = 32;
    opts.threads = 8;
    auto stats = run_ensemble(Free{}, p, grid, omega, 777, opts);
    auto [p2, err] = momentum_dispersion_empirical(stats);
    CHECK(std::fabs(p2 - p.m * p.T) < 3.0 * err);

    // doubling the cutoff overshoots by the amount the quadrature predicts
    auto stats2 = run_ensemble(Free{}, p, grid, 2.0 * omega, 778, opts);
    auto [p2b, err2] = momentum_dispersion_empirical(stats2);
    const double predicted = analysis::momentum_dispersion_integral(2.0 * omega, p);
    CHECK(predicted > 1.02 * p.m * p.T); // the overshoot is resolvable
    CHECK(std::fabs(p2b - predicted) < 3.0 * err2);
}

TEST_CASE("momentum spectral density matches S_FF/(w^2+gamma^2) band-averaged") {
    auto p = classical_params();
    p.hbar = 0.5;
    TimeGrid grid{0.0, 0.02, 8192};
    const double cutoff = 30.0;

    const std::size_t nhalf = grid.n / 2;
    std::vector<double> mean_spp(nhalf + 1, 0.0);
    const int realizations = 24;
    for (int r = 0; r < realizations; ++r) {
        auto force =
            noise::sample_noise(grid, p, cutoff, 1717, 1, static_cast<std::uint64_t>(r));
        const double z = 0.0;
        // two passes of the same periodic forcing: the second one starts from
        // the first pass's end state, i.e. on the periodic steady orbit, so
        // the periodogram sees a genuinely periodic signal (no leakage)
        auto warm = integrate(Free{}, p, grid, force, std::span<const double>(&z, 1),
                              std::span<const double>(&z, 1));
        const double p_end = warm.P[0][grid.n - 1];
        const double r_end = warm.R[0][grid.n - 1];
        auto traj = integrate(Free{}, p, grid, force, std::span<const double>(&r_end, 1),
                              std::span<const double>(&p_end, 1));
        auto spec = rfft(traj.P[0]);
        const double scale = grid.dt / static_cast<double>(grid.n);
        for (std::size_t k = 0; k <= nhalf; ++k) mean_spp[k] += scale * std::norm(spec[k]);
    }
    for (auto& v : mean_spp) v /= realizations;

    // band-average over bins fully below the cutoff
    const int bands = 6;
    const std::size_t k_cut = static_cast<std::size_t>(cutoff / grid.domega());
    for (int b = 0; b < bands; ++b) {
        const std::size_t k_lo = 1 + static_cast<std::size_t>(b) * k_cut / bands;
        const std::size_t k_hi = static_cast<std::size_t>(b + 1) * k_cut / bands;
        double got = 0.0, expect = 0.0;
        for (std::size_t k = k_lo; k < k_hi; ++k) {
            const double w = grid.omega(k);
            got += mean_spp[k];
            expect += noise::fdt_spectral_density(w, p) / (w * w + p.gamma * p.gamma);
        }
        CHECK(std::fabs(got / expect - 1.0) < 0.05);
    }
}

TEST_CASE("ensemble histogram matches the Boltzmann weight (chi-square 1%)") {
    auto p = classical_params();
    const double k = 1.0;
    TimeGrid grid{0.0, 0.02, 16384}; // ~327/gamma
    EnsembleOptions opts;
    opts.realizations = 48;
    opts.threads = 4;
    opts.hist_bins = 16;
    opts.hist_halfwidth = 3.5;
    opts.hist_stride = 8.0; // decorrelated position samples
    auto stats = run_ensemble(Harmonic{k, {0, 0, 0}}, p, grid, grid.nyquist(), 31337, opts);
    REQUIRE(stats.hist_samples > 1000);

    const double sigma = std::sqrt(p.T / k);
    std::vector<double> weight(static_cast<std::size_t>(opts.hist_bins));
    double total_weight = 0.0;
    for (int b = 0; b < opts.hist_bins; ++b) {
        const double lo = stats.hist_edges[static_cast<std::size_t>(b)];
        const double hi = stats.hist_edges[static_cast<std::size_t>(b) + 1];
        weight[static_cast<std::size_t>(b)] =
            0.5 * (std::erf(hi / (sigma * std::sqrt(2.0))) -
                   std::erf(lo / (sigma * std::sqrt(2.0))));
        total_weight += weight[static_cast<std::size_t>(b)];
    }
    std::vector<double> expected(static_cast<std::size_t>(opts.hist_bins));
    for (int b = 0; b < opts.hist_bins; ++b)
        expected[static_cast<std::size_t>(b)] = weight[static_cast<std::size_t>(b)] /
                                                total_weight *
                                                static_cast<double>(stats.hist_samples);
    const double chi2 = oracle::chi_square(stats.hist_counts, expected);
    const double pvalue = oracle::gammq(0.5 * (opts.hist_bins - 1), 0.5 * chi2);
    CHECK(pvalue > 0.01);
}

TEST_CASE("quantum noise leaves the harmonic equilibrium Boltzmann within statistics") {
    // Sharp-cutoff colored noise carries a known resonance bias for bound
    // particles (the cutoff closes the free-particle momentum integral, not
    // the resonant one): +1.8% position variance at theta = 0.5, growing
    // fast with theta. At moderate theta the equilibrium histogram agrees
    // with the Boltzmann weight within achievable statistics.
    BathParams p = classical_params();
    p.hbar = 0.5;
    const double k = 1.0;
    const double omega = analysis::solve_cutoff(p).Omega;
    TimeGrid grid{0.0, 0.0125, 16384};
    EnsembleOptions opts;
    opts.realizations = 64;
    opts.threads = 8;
    opts.hist_bins = 14;
    opts.hist_halfwidth = 3.0;
    opts.hist_stride = 8.0;
    auto stats = run_ensemble(Harmonic{k, {0, 0, 0}}, p, grid, omega, 2718, opts);
    REQUIRE(stats.hist_samples > 1000);

    const double sigma = std::sqrt(p.T / k);
    std::vector<double> expected(static_cast<std::size_t>(opts.hist_bins));
    double total = 0.0;
    for (int b = 0; b < opts.hist_bins; ++b) {
        const double lo = stats.hist_edges[static_cast<std::size_t>(b)];
        const double hi = stats.hist_edges[static_cast<std::size_t>(b) + 1];
        expected[static_cast<std::size_t>(b)] =
            0.5 * (std::erf(hi / (sigma * std::sqrt(2.0))) -
                   std::erf(lo / (sigma * std::sqrt(2.0))));
        total += expected[static_cast<std::size_t>(b)];
    }
    for (auto& e : expected) e *= static_cast<double>(stats.hist_samples) / total;
    const double chi2 = oracle::chi_square(stats.hist_counts, expected);
    const double pvalue = oracle::gammq(0.5 * (opts.hist_bins - 1), 0.5 * chi2);
    CHECK(pvalue > 0.01);

    // quantitative variance bound from the histogram itself
    double var = 0.0, n = 0.0;
    for (int b = 0; b < opts.hist_bins; ++b) {
        const double mid = 0.5 * (stats.hist_edges[static_cast<std::size_t>(b)] +
                                  stats.hist_edges[static_cast<std::size_t>(b) + 1]);
        var += stats.hist_counts[static_cast<std::size_t>(b)] * mid * mid;
        n += stats.hist_counts[static_cast<std::size_t>(b)];
    }
    var /= n;
    CHECK(std::fabs(var / (p.T / k) - 1.0) < 0.05);
}

TEST_CASE("short burn-in is recorded as a warning") {
    auto p = classical_params();
    TimeGrid grid{0.0, 0.01, 4096};
    EnsembleOptions opts;
    opts.realizations = 2;
    opts.burn_in = 1.0; // below 5/gamma
    auto stats = run_ensemble(Free{}, p, grid, grid.nyquist(), 5, opts);
    REQUIRE(!stats.warnings.empty());
}
