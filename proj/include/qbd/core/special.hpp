#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace qbd {

using Rational = boost::multiprecision::cpp_rational;

/// Hyperbolic cotangent, numerically stable on the whole real axis.
/// Below |x| = 1e-4 the Laurent form 1/x + x/3 - x^3/45 is used to avoid
/// cancellation; elsewhere 1 + 2/expm1(2|x|) avoids overflow for large x.
/// Odd symmetry holds exactly. x = 0 signals a domain error.
double coth_stable(double x);

/// x*coth(x) with the exact removable limit xcoth(0) = 1. Smooth and >= 1.
double xcoth(double x);

/// Even-index Bernoulli numbers B_0, B_2, ..., B_{2*n_max} as exact
/// rationals. Capped at n_max = 30 (B_60); beyond that the magnitudes
/// explode and double conversion loses meaning.
std::vector<Rational> bernoulli_even_exact(int n_max);

/// Same sequence converted to double.
std::vector<double> bernoulli_even(int n_max);

inline constexpr int kBernoulliEvenCap = 30;

} // namespace qbd
