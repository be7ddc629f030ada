#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qbd/core/grids.hpp"
#include "qbd/core/params.hpp"
#include "qbd/langevin/potential.hpp"

namespace qbd::langevin {

struct Observable {
    double mean = 0.0;
    double dispersion = 0.0; // variance across contributing samples
    double std_error = 0.0;
    std::size_t count = 0;
};

struct EnsembleStats {
    Observable p_squared;             // sum over components of P^2, post burn-in
    std::vector<double> hist_edges;   // position histogram (first component)
    std::vector<double> hist_counts;
    std::size_t hist_samples = 0;
    double hist_stride = 0.0;         // decorrelation stride used for sampling
    std::vector<double> p2_per_realization;
    int realizations = 0;
    double burn_in = 0.0;
    bool free_particle = false;
    std::vector<std::string> warnings;
};

struct EnsembleOptions {
    int realizations = 64;
    double burn_in = -1.0;     // < 0: default 10/gamma
    int threads = 1;
    int hist_bins = 0;         // 0 disables the histogram
    double hist_halfwidth = 0.0;
    double hist_stride = -1.0; // < 0: default 5/gamma between pooled samples
};

/// Monte-Carlo ensemble of Langevin runs: realization i uses the noise
/// stream (seed, i, component). Observables are time-and-ensemble averages
/// over the post-burn-in window; errors come from the scatter of
/// per-realization means (32 time blocks when only one realization is run).
EnsembleStats run_ensemble(const Potential& potential, const BathParams& params,
                           const TimeGrid& grid, double cutoff, std::uint64_t seed,
                           const EnsembleOptions& opts);

/// Empirical momentum dispersion <P^2> with its standard error.
/// Meaningful against the spectral-integral prediction only for
/// free-particle runs; raises otherwise.
std::pair<double, double> momentum_dispersion_empirical(const EnsembleStats& stats);

} // namespace qbd::langevin
