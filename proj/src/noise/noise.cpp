#include "qbd/noise/noise.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qbd/core/csv.hpp"
#include "qbd/core/fft.hpp"
#include "qbd/core/rng.hpp"
#include "qbd/core/special.hpp"

namespace qbd::noise {

double fdt_spectral_density(double omega, const BathParams& params) {
    params.validate();
    return 2.0 * params.m * params.gamma * params.T *
           xcoth(0.5 * params.beta() * params.hbar * omega);
}

NoiseTrajectory sample_noise(const TimeGrid& grid, const BathParams& params,
                             double cutoff, std::uint64_t seed, int component_count,
                             std::uint64_t realization) {
    grid.validate();
    params.validate();
    if (grid.n % 2 != 0) throw std::invalid_argument("sample_noise: n must be even");
    if (component_count < 1)
        throw std::invalid_argument("sample_noise: need at least one component");
    if (!(cutoff >= 0.0)) throw std::invalid_argument("sample_noise: cutoff must be >= 0");
    if (cutoff > grid.nyquist() * (1.0 + 1e-12)) {
        const double needed = 3.141592653589793 / cutoff;
        throw std::invalid_argument(
            "sample_noise: cutoff exceeds the grid Nyquist frequency pi/dt; "
            "need dt <= " + format_double(needed));
    }

    const std::size_t n = grid.n;
    const std::size_t nhalf = n / 2;
    const double norm = 1.0 / (static_cast<double>(n) * grid.dt);

    NoiseTrajectory out;
    out.grid = grid;
    out.params = params;
    out.cutoff = cutoff;
    out.seed = seed;
    out.realization = realization;
    out.samples.resize(static_cast<std::size_t>(component_count));

    for (int c = 0; c < component_count; ++c) {
        GaussianStream rng(stream_seed(seed, realization, static_cast<std::uint64_t>(c)));
        std::vector<std::complex<double>> amp(nhalf + 1);

        // Fixed draw order: interior bins (two normals each), then DC and
        // Nyquist (one each), so the stream layout is reproducible.
        for (std::size_t k = 1; k < nhalf; ++k) {
            const double z_re = rng.normal();
            const double z_im = rng.normal();
            const double w = static_cast<double>(k) * grid.domega();
            if (w > cutoff) {
                amp[k] = 0.0;
                continue;
            }
            const double sigma2 = fdt_spectral_density(w, params) * norm;
            const double s = std::sqrt(0.5 * sigma2);
            amp[k] = {s * z_re, s * z_im};
        }
        {
            // DC: drawn from the classical value for stream-layout stability,
            // then dropped -- the exact zero-mean property wins.
            (void)rng.normal();
            amp[0] = 0.0;
        }
        {
            const double z = rng.normal();
            const double w = grid.nyquist();
            if (w > cutoff) {
                amp[nhalf] = 0.0;
            } else {
                const double sigma2 = fdt_spectral_density(w, params) * norm;
                amp[nhalf] = {std::sqrt(sigma2) * z, 0.0};
            }
        }

        // irfft supplies the Hermitian-symmetric negative-frequency half and
        // divides by n; the synthesis sum F_j = sum_k c_k e^{2 pi i jk/n}
        // therefore needs a factor n restored.
        auto x = irfft(amp, n);
        for (auto& v : x) v *= static_cast<double>(n);
        out.samples[static_cast<std::size_t>(c)] = std::move(x);
    }
    return out;
}

SpectrumEstimate periodogram(std::span<const NoiseTrajectory> trajectories, int bands) {
    if (trajectories.empty()) throw std::invalid_argument("periodogram: no trajectories");
    if (bands < 1) throw std::invalid_argument("periodogram: bands must be >= 1");
    const auto& g0 = trajectories.front().grid;
    const auto& p0 = trajectories.front().params;
    for (const auto& t : trajectories) {
        if (t.grid.n != g0.n || t.grid.dt != g0.dt)
            throw std::invalid_argument("periodogram: trajectories use different grids");
        if (t.params.m != p0.m || t.params.gamma != p0.gamma || t.params.T != p0.T ||
            t.params.hbar != p0.hbar)
            throw std::invalid_argument("periodogram: trajectories use different params");
    }

    const std::size_t n = g0.n;
    const std::size_t nhalf = n / 2;
    if (static_cast<std::size_t>(bands) > nhalf)
        throw std::invalid_argument("periodogram: more bands than positive bins");

    SpectrumEstimate est;
    est.omega.assign(static_cast<std::size_t>(bands), 0.0);
    est.power.assign(static_cast<std::size_t>(bands), 0.0);
    est.std_error.assign(static_cast<std::size_t>(bands), 0.0);
    est.target.assign(static_cast<std::size_t>(bands), 0.0);

    // Positive bins 1..n/2 partitioned into contiguous, near-equal bands.
    auto band_of = [&](std::size_t k) -> std::size_t {
        return ((k - 1) * static_cast<std::size_t>(bands)) / nhalf;
    };
    std::vector<double> bin_count(static_cast<std::size_t>(bands), 0.0);
    for (std::size_t k = 1; k <= nhalf; ++k) {
        const std::size_t b = band_of(k);
        const double w = static_cast<double>(k) * g0.domega();
        est.omega[b] += w;
        est.target[b] += fdt_spectral_density(w, p0);
        bin_count[b] += 1.0;
    }
    for (std::size_t b = 0; b < static_cast<std::size_t>(bands); ++b) {
        est.omega[b] /= bin_count[b];
        est.target[b] /= bin_count[b];
    }

    // One sample per (trajectory, component): its band-mean periodogram.
    std::vector<std::vector<double>> samples(static_cast<std::size_t>(bands));
    const double psd_scale = g0.dt / static_cast<double>(n);
    double total_power_acc = 0.0;
    std::size_t n_series = 0;
    for (const auto& t : trajectories) {
        for (const auto& comp : t.samples) {
            const auto spec = rfft(comp);
            std::vector<double> band_acc(static_cast<std::size_t>(bands), 0.0);
            double total = 0.0;
            for (std::size_t k = 1; k <= nhalf; ++k) {
                const double s_hat = psd_scale * std::norm(spec[k]);
                band_acc[band_of(k)] += s_hat;
                // two-sided total: interior bins appear twice
                total += (k < nhalf) ? 2.0 * s_hat : s_hat;
            }
            total += psd_scale * std::norm(spec[0]);
            total_power_acc += total / (static_cast<double>(n) * g0.dt);
            for (std::size_t b = 0; b < static_cast<std::size_t>(bands); ++b)
                samples[b].push_back(band_acc[b] / bin_count[b]);
            ++n_series;
        }
    }

    est.realizations = static_cast<int>(n_series);
    est.total_power = total_power_acc / static_cast<double>(n_series);
    for (std::size_t b = 0; b < static_cast<std::size_t>(bands); ++b) {
        double mean = 0.0;
        for (double v : samples[b]) mean += v;
        mean /= static_cast<double>(n_series);
        double var = 0.0;
        for (double v : samples[b]) var += (v - mean) * (v - mean);
        est.power[b] = mean;
        est.std_error[b] = (n_series > 1)
                               ? std::sqrt(var / (static_cast<double>(n_series) *
                                                  (static_cast<double>(n_series) - 1.0)))
                               : 0.0;
    }
    return est;
}

void export_csv(const NoiseTrajectory& traj, const std::string& path) {
    CsvWriter w(path);
    w.comment("langevin force trajectory");
    w.comment("m=" + format_double(traj.params.m) + " gamma=" + format_double(traj.params.gamma) +
              " tau=" + format_double(traj.params.tau) + " T=" + format_double(traj.params.T) +
              " hbar=" + format_double(traj.params.hbar) + " d=" + std::to_string(traj.params.d));
    w.comment("seed=" + std::to_string(traj.seed) + " realization=" +
              std::to_string(traj.realization) + " cutoff=" + format_double(traj.cutoff));
    std::vector<std::string> names{"t"};
    for (int c = 0; c < traj.components(); ++c) names.push_back("F_" + std::to_string(c + 1));
    w.header(names);
    std::vector<double> row(names.size());
    for (std::size_t j = 0; j < traj.grid.n; ++j) {
        row[0] = traj.grid.time(j);
        for (int c = 0; c < traj.components(); ++c)
            row[static_cast<std::size_t>(c) + 1] = traj.samples[static_cast<std::size_t>(c)][j];
        w.row(row);
    }
    w.close();
}

} // namespace qbd::noise
