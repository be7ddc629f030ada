#pragma once

#include <array>
#include <span>
#include <variant>
#include <vector>

#include "qbd/core/grids.hpp"

namespace qbd::langevin {

struct Free {};

/// Isotropic harmonic well U = k/2 |r - center|^2.
struct Harmonic {
    double k = 1.0;
    std::array<double, 3> center{0.0, 0.0, 0.0};
};

/// Separable double well U = sum_i (a r_i^4 / 4 - b r_i^2 / 2); minima at
/// |r_i| = sqrt(b/a).
struct DoubleWell {
    double a = 1.0;
    double b = 1.0;
};

/// 1D potential sampled on a bounded SpaceGrid: piecewise linear (order 1)
/// or natural cubic spline (order 3). Evaluation clamps to the table range.
struct Tabulated {
    SpaceGrid grid;
    std::vector<double> values;
    int order = 3;
    // natural-spline second derivatives; filled lazily by prepare()
    mutable std::vector<double> spline_m;
    void prepare() const;
};

using Potential = std::variant<Free, Harmonic, DoubleWell, Tabulated>;

double potential_energy(const Potential& u, std::span<const double> r);
void potential_gradient(const Potential& u, std::span<const double> r, std::span<double> out);

/// Largest curvature scale |U''| relevant for step-size bounds; probed on a
/// coarse sweep of the accessible range for non-quadratic potentials.
double potential_max_curvature(const Potential& u, double r_scale);

} // namespace qbd::langevin
