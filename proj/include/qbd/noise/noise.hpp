#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qbd/core/grids.hpp"
#include "qbd/core/params.hpp"

namespace qbd::noise {

/// Langevin-force spectral density per component,
/// S_FF(omega) = m*gamma*hbar*omega*coth(beta*hbar*omega/2),
/// with the exact omega -> 0 limit 2*m*gamma*T. Even in omega and bounded
/// below by the classical value 2*m*gamma*T everywhere.
double fdt_spectral_density(double omega, const BathParams& params);

/// A sampled realization of the stationary Gaussian Langevin force.
/// Components are mutually independent; each has exactly zero sample mean
/// (the omega = 0 synthesis bin is dropped, see sample_noise). The signal is
/// periodic with period n*dt: runs consuming it must not exceed that window.
struct NoiseTrajectory {
    TimeGrid grid;
    BathParams params;
    double cutoff = 0.0;    // angular frequency Omega; modes above it are zeroed
    std::uint64_t seed = 0;
    std::uint64_t realization = 0;
    std::vector<std::vector<double>> samples; // [component][time index]

    int components() const { return static_cast<int>(samples.size()); }
};

/// Frequency-domain synthesis: independent complex-Gaussian mode amplitudes
/// scaled to the target spectrum and Hermitian-symmetrized. Mode k carries
/// expected two-sided power S_FF(omega_k); |omega_k| > cutoff is zeroed
/// (hard clip). The omega = 0 bin is synthesized from the classical value
/// and then removed with the sample mean: zero mean takes precedence.
/// Deterministic given (seed, realization, grid, params, cutoff).
NoiseTrajectory sample_noise(const TimeGrid& grid, const BathParams& params,
                             double cutoff, std::uint64_t seed, int component_count,
                             std::uint64_t realization = 0);

/// Band-averaged power spectral density estimate with standard errors.
struct SpectrumEstimate {
    std::vector<double> omega;       // band centers (mean bin frequency)
    std::vector<double> power;       // band-averaged two-sided PSD
    std::vector<double> std_error;   // standard error over realizations
    std::vector<double> target;      // band-averaged model spectrum (same bins)
    int realizations = 0;
    /// Mean over realizations of sum_k S_hat(omega_k)/(n*dt); equals the
    /// sample variance of each realization (Parseval).
    double total_power = 0.0;
};

/// Averages periodograms S_hat(omega_k) = dt/n |X_k|^2 of all trajectories
/// and components into `bands` contiguous groups of positive-frequency bins.
/// All trajectories must share grid and params.
SpectrumEstimate periodogram(std::span<const NoiseTrajectory> trajectories, int bands);

/// CSV export: '#' metadata (params, seed, cutoff), columns t, F_1..F_d.
void export_csv(const NoiseTrajectory& traj, const std::string& path);

} // namespace qbd::noise
