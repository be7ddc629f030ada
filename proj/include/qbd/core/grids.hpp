#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace qbd {

/// Uniform time grid t_j = t0 + j*dt, j = 0..n-1.
///
/// The associated frequency grid is omega_k = 2*pi*k/(n*dt) with k taken
/// from the half-open symmetric index set {-n/2, ..., n/2 - 1} (n even).
/// Storage index k in [0, n) maps onto that set in the usual FFT order:
/// k <= n/2 - 1 keeps k, k >= n/2 wraps to k - n.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 1.0;
    std::size_t n = 0;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be > 0");
        if (n < 2) throw std::invalid_argument("TimeGrid: n must be >= 2");
    }

    double time(std::size_t j) const { return t0 + static_cast<double>(j) * dt; }
    double duration() const { return static_cast<double>(n) * dt; }

    double nyquist() const { return std::numbers::pi / dt; }
    double domega() const { return 2.0 * std::numbers::pi / (static_cast<double>(n) * dt); }

    /// Signed frequency of storage index k (FFT bin order).
    double omega(std::size_t k) const {
        const auto half = n / 2;
        const double ks = (k < half) ? static_cast<double>(k)
                                     : static_cast<double>(k) - static_cast<double>(n);
        return ks * domega();
    }

    /// Inverse of omega(): recovers the storage index of a grid frequency.
    std::size_t index_of(double w) const {
        const long long ks = std::llround(w / domega());
        const long long nn = static_cast<long long>(n);
        return static_cast<std::size_t>(((ks % nn) + nn) % nn);
    }
};

/// Uniform 1D space grid over a domain of given length, centered at 0.
/// Periodic: r_j = -L/2 + j*dr with dr = L/M (last cell wraps).
/// Bounded:  r_j = -L/2 + j*dr with dr = L/(M-1) (nodes include both walls).
struct SpaceGrid {
    double length = 1.0;
    std::size_t points = 4;
    bool periodic = true;

    void validate() const {
        if (!(length > 0.0)) throw std::invalid_argument("SpaceGrid: length must be > 0");
        if (points < 4) throw std::invalid_argument("SpaceGrid: points must be >= 4");
    }

    double spacing() const {
        return periodic ? length / static_cast<double>(points)
                        : length / static_cast<double>(points - 1);
    }

    double pos(std::size_t j) const { return -0.5 * length + static_cast<double>(j) * spacing(); }

    bool operator==(const SpaceGrid&) const = default;
};

} // namespace qbd
