#include "qbd/operators/symbols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbd/core/fft.hpp"
#include "qbd/core/special.hpp"

namespace qbd::ops {

double temperature_symbol(double omega, const BathParams& params) {
    params.validate();
    return params.T * xcoth(0.5 * params.beta() * params.hbar * omega);
}

double temperature_symbol_series(double omega, const BathParams& params, int order) {
    params.validate();
    const double x = params.beta() * params.hbar * omega;
    if (!(std::fabs(x) < 2.0 * std::numbers::pi))
        throw std::domain_error(
            "temperature_symbol_series: |beta*hbar*omega| must be below the "
            "convergence radius 2*pi");
    const auto b = bernoulli_even(order); // throws above the order cap
    double sum = 0.0;
    double pow_fact = 1.0; // x^{2n} / (2n)!
    for (int n = 0; n <= order; ++n) {
        sum += b[static_cast<std::size_t>(n)] * pow_fact;
        pow_fact *= x * x / ((2.0 * n + 1.0) * (2.0 * n + 2.0));
    }
    return params.T * sum;
}

double friction_symbol(double omega, const BathParams& params) {
    params.validate();
    return params.gamma + params.tau * omega * omega;
}

std::complex<double> eval(const SpectralSymbol& symbol, double omega) {
    return std::visit(
        [omega](const auto& s) -> std::complex<double> {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, TemperatureExact>) {
                return temperature_symbol(omega, s.params);
            } else if constexpr (std::is_same_v<S, TemperatureSeries>) {
                return temperature_symbol_series(omega, s.params, s.order);
            } else if constexpr (std::is_same_v<S, Friction>) {
                return s.gamma + s.tau * omega * omega;
            } else if constexpr (std::is_same_v<S, Identity>) {
                return 1.0;
            } else {
                std::complex<double> prod = 1.0;
                for (const auto& factor : s.factors) prod *= eval(factor, omega);
                return prod;
            }
        },
        symbol);
}

std::vector<double> apply_time_symbol(std::span<const double> signal,
                                      const TimeGrid& grid,
                                      const SpectralSymbol& symbol) {
    grid.validate();
    if (signal.size() != grid.n)
        throw std::invalid_argument("apply_time_symbol: signal length does not match grid");
    auto spec = rfft(signal);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        // rfft bins carry |omega_k|; even symbols make the sign irrelevant.
        const double w = static_cast<double>(k) * grid.domega();
        const std::complex<double> mult = eval(symbol, w);
        if (std::fabs(mult.imag()) > 1e-12 * std::max(1.0, std::fabs(mult.real())))
            throw std::invalid_argument(
                "apply_time_symbol: symbol has nonzero imaginary part on the grid");
        spec[k] *= mult.real();
    }
    return irfft(spec, grid.n);
}

} // namespace qbd::ops
