#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace qbd::pde {

/// Solver for (I + c * D2^2) v = u with the discrete 1D Laplacian D2
/// (spacing dr). This is the bounded resummation used for the order-reduced
/// time-derivative corrections: per mode it divides by 1 + c*sigma^2 >= 1
/// (sigma the Laplacian symbol), so the corrected operator can never flip
/// the sign of the baseline dissipation at any resolvable scale.
///
/// Periodic grids solve exactly in Fourier space; bounded grids use the
/// symmetric flux-form Neumann Laplacian and a cached banded Cholesky
/// factorization.
class BiharmonicResolvent {
public:
    BiharmonicResolvent(std::size_t n, double c, double dr, bool periodic);
    ~BiharmonicResolvent();
    BiharmonicResolvent(BiharmonicResolvent&&) noexcept;
    BiharmonicResolvent& operator=(BiharmonicResolvent&&) noexcept;

    std::vector<double> solve(const std::vector<double>& u) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace qbd::pde
