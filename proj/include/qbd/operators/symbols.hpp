#pragma once

#include <complex>
#include <span>
#include <variant>
#include <vector>

#include "qbd/core/grids.hpp"
#include "qbd/core/params.hpp"

namespace qbd::ops {

/// Frequency-domain multipliers for the time operators acting on signals.
/// All built-in symbols are real and even in omega; Product multiplies
/// factors pointwise. Symbols are plain multiplier values, not operator
/// objects: composition beyond products is out of scope.
struct TemperatureExact {
    BathParams params;
};

struct TemperatureSeries {
    BathParams params;
    int order = 1;
};

struct Friction {
    double gamma = 1.0;
    double tau = 0.0;
};

struct Identity {};

struct Product;

using SpectralSymbol =
    std::variant<TemperatureExact, TemperatureSeries, Friction, Identity, Product>;

struct Product {
    std::vector<SpectralSymbol> factors;
};

/// Multiplier of the exact temperature operator at angular frequency omega:
/// T * (x/2) coth(x/2) with x = beta*hbar*omega. Even in omega, >= T,
/// equal to T at omega = 0 and everywhere in the classical limit hbar = 0.
double temperature_symbol(double omega, const BathParams& params);

/// Truncated Bernoulli series of the same multiplier:
/// T * sum_{n=0}^{order} B_{2n} x^{2n} / (2n)!, x = beta*hbar*omega.
/// Requires |x| < 2*pi (convergence radius) and order <= 30.
double temperature_symbol_series(double omega, const BathParams& params, int order);

/// Friction operator multiplier gamma + tau*omega^2 (d/dt^2 -> -omega^2).
double friction_symbol(double omega, const BathParams& params);

std::complex<double> eval(const SpectralSymbol& symbol, double omega);

/// Applies a real-even symbol to a sampled signal: inverse transform of
/// symbol(omega_k) * transform(signal). Linear; preserves realness.
/// A symbol with nonzero imaginary part on the grid violates the contract.
std::vector<double> apply_time_symbol(std::span<const double> signal,
                                      const TimeGrid& grid,
                                      const SpectralSymbol& symbol);

} // namespace qbd::ops
