#include "qbd/langevin/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "qbd/core/parallel.hpp"
#include "qbd/langevin/integrate.hpp"
#include "qbd/noise/noise.hpp"

namespace qbd::langevin {

EnsembleStats run_ensemble(const Potential& potential, const BathParams& params,
                           const TimeGrid& grid, double cutoff, std::uint64_t seed,
                           const EnsembleOptions& opts) {
    params.validate();
    grid.validate();
    if (opts.realizations < 1)
        throw std::invalid_argument("run_ensemble: need at least one realization");

    EnsembleStats stats;
    stats.realizations = opts.realizations;
    stats.free_particle = std::holds_alternative<Free>(potential);
    stats.burn_in = (opts.burn_in < 0.0) ? 10.0 / params.gamma : opts.burn_in;
    if (stats.burn_in < 5.0 / params.gamma)
        stats.warnings.push_back("burn_in below 5/gamma; equilibrium averages may be biased");
    if (stats.burn_in >= 0.9 * grid.duration())
        throw std::invalid_argument("run_ensemble: burn_in leaves <10% of the run for averaging");

    const std::size_t j_burn =
        static_cast<std::size_t>(std::ceil(stats.burn_in / grid.dt));
    const std::size_t d = static_cast<std::size_t>(params.d);

    const bool want_hist = opts.hist_bins > 0 && opts.hist_halfwidth > 0.0;
    stats.hist_stride = (opts.hist_stride < 0.0) ? 5.0 / params.gamma : opts.hist_stride;
    const std::size_t j_stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(stats.hist_stride / grid.dt));
    if (want_hist) {
        stats.hist_edges.resize(static_cast<std::size_t>(opts.hist_bins) + 1);
        for (int b = 0; b <= opts.hist_bins; ++b)
            stats.hist_edges[static_cast<std::size_t>(b)] =
                -opts.hist_halfwidth +
                2.0 * opts.hist_halfwidth * static_cast<double>(b) / opts.hist_bins;
        stats.hist_counts.assign(static_cast<std::size_t>(opts.hist_bins), 0.0);
    }

    std::vector<double> p2_means(static_cast<std::size_t>(opts.realizations), 0.0);
    std::vector<std::vector<double>> hist_parts(
        static_cast<std::size_t>(opts.realizations));
    std::vector<std::size_t> hist_counts_n(static_cast<std::size_t>(opts.realizations), 0);

    std::vector<double> zeros(d, 0.0);

    parallel_for(static_cast<std::size_t>(opts.realizations), opts.threads, [&](std::size_t i) {
        const auto force = noise::sample_noise(grid, params, cutoff, seed,
                                               static_cast<int>(d), i);
        const auto traj = integrate(potential, params, grid, force, zeros, zeros);
        double acc = 0.0;
        std::size_t cnt = 0;
        for (std::size_t j = j_burn; j < grid.n; ++j) {
            double p2 = 0.0;
            for (std::size_t c = 0; c < d; ++c) p2 += traj.P[c][j] * traj.P[c][j];
            acc += p2;
            ++cnt;
        }
        p2_means[i] = acc / static_cast<double>(cnt);

        if (want_hist) {
            auto& h = hist_parts[i];
            h.assign(static_cast<std::size_t>(opts.hist_bins), 0.0);
            const double lo = -opts.hist_halfwidth;
            const double bw = 2.0 * opts.hist_halfwidth / opts.hist_bins;
            for (std::size_t j = j_burn; j < grid.n; j += j_stride) {
                const double x = traj.R[0][j];
                const int b = static_cast<int>(std::floor((x - lo) / bw));
                if (b >= 0 && b < opts.hist_bins) {
                    h[static_cast<std::size_t>(b)] += 1.0;
                    ++hist_counts_n[i];
                }
            }
        }
    });

    // reduction in fixed realization order: deterministic for any thread count
    const auto n_real = static_cast<std::size_t>(opts.realizations);
    double mean = 0.0;
    for (double v : p2_means) mean += v;
    mean /= static_cast<double>(n_real);
    double var = 0.0;
    for (double v : p2_means) var += (v - mean) * (v - mean);
    var = (n_real > 1) ? var / static_cast<double>(n_real - 1) : 0.0;

    stats.p_squared.mean = mean;
    stats.p_squared.dispersion = var;
    stats.p_squared.count = n_real;
    if (n_real > 1) {
        stats.p_squared.std_error = std::sqrt(var / static_cast<double>(n_real));
    } else {
        // single trajectory: 32-block time averaging for the error bar
        const std::size_t n_avail = grid.n - j_burn;
        const std::size_t blocks = std::min<std::size_t>(32, n_avail);
        const std::size_t blen = n_avail / blocks;
        const auto force = noise::sample_noise(grid, params, cutoff, seed, static_cast<int>(d), 0);
        const auto traj = integrate(potential, params, grid, force, zeros, zeros);
        std::vector<double> bm(blocks, 0.0);
        for (std::size_t b = 0; b < blocks; ++b) {
            double acc = 0.0;
            for (std::size_t j = j_burn + b * blen; j < j_burn + (b + 1) * blen; ++j) {
                double p2 = 0.0;
                for (std::size_t c = 0; c < d; ++c) p2 += traj.P[c][j] * traj.P[c][j];
                acc += p2;
            }
            bm[b] = acc / static_cast<double>(blen);
        }
        double bmean = 0.0;
        for (double v : bm) bmean += v;
        bmean /= static_cast<double>(blocks);
        double bvar = 0.0;
        for (double v : bm) bvar += (v - bmean) * (v - bmean);
        bvar /= static_cast<double>(blocks - 1);
        stats.p_squared.std_error = std::sqrt(bvar / static_cast<double>(blocks));
    }

    if (want_hist) {
        for (std::size_t i = 0; i < n_real; ++i) {
            for (std::size_t b = 0; b < stats.hist_counts.size(); ++b)
                stats.hist_counts[b] += hist_parts[i][b];
            stats.hist_samples += hist_counts_n[i];
        }
    }
    stats.p2_per_realization = std::move(p2_means);
    return stats;
}

std::pair<double, double> momentum_dispersion_empirical(const EnsembleStats& stats) {
    if (!stats.free_particle)
        throw std::invalid_argument(
            "momentum_dispersion_empirical: stats must come from a free-particle run");
    return {stats.p_squared.mean, stats.p_squared.std_error};
}

} // namespace qbd::langevin
