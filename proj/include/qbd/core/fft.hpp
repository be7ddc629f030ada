#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qbd {

/// Forward real FFT: X_k = sum_j x_j exp(-2*pi*i*j*k/n), k = 0..n/2.
/// The remaining bins follow from Hermitian symmetry X_{n-k} = conj(X_k).
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft, normalized so irfft(rfft(x), n) == x.
/// X must hold n/2 + 1 bins.
std::vector<double> irfft(std::span<const std::complex<double>> X, std::size_t n);

} // namespace qbd
