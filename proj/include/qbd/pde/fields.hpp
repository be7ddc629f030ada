#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qbd/core/grids.hpp"

namespace qbd::pde {

/// Configurational probability density rho(r) on a SpaceGrid.
struct DensityField {
    SpaceGrid grid;
    std::vector<double> rho;
    double time = 0.0;

    void validate() const {
        grid.validate();
        if (rho.size() != grid.points)
            throw std::invalid_argument("DensityField: value count does not match grid");
    }

    double mass() const {
        double s = 0.0;
        for (double v : rho) s += v;
        return s * grid.spacing();
    }

    void normalize() {
        const double m = mass();
        if (!(m > 0.0)) throw std::invalid_argument("DensityField: nonpositive total mass");
        for (double& v : rho) v /= m;
    }
};

/// Phase-space density f(p, r) on a tensor grid: uniform p levels crossed
/// with a SpaceGrid. p is cell-centered and symmetric about 0 (np odd keeps
/// the p = 0 level on the grid). Storage is row-major in p: f[i*nr + j].
struct PhaseSpaceField {
    SpaceGrid rgrid;
    std::size_t np = 0;
    double p_max = 0.0;
    std::vector<double> f;
    double time = 0.0;

    std::size_t nr() const { return rgrid.points; }
    double dp() const { return 2.0 * p_max / static_cast<double>(np - 1); }
    double p(std::size_t i) const { return -p_max + static_cast<double>(i) * dp(); }
    double& at(std::size_t i, std::size_t j) { return f[i * nr() + j]; }
    double at(std::size_t i, std::size_t j) const { return f[i * nr() + j]; }

    void validate() const {
        rgrid.validate();
        if (np < 5 || np % 2 == 0)
            throw std::invalid_argument("PhaseSpaceField: np must be odd and >= 5");
        if (!(p_max > 0.0)) throw std::invalid_argument("PhaseSpaceField: p_max must be > 0");
        if (f.size() != np * rgrid.points)
            throw std::invalid_argument("PhaseSpaceField: value count does not match grid");
    }

    double mass() const {
        double s = 0.0;
        for (double v : f) s += v;
        return s * dp() * rgrid.spacing();
    }

    void normalize() {
        const double m = mass();
        if (!(m > 0.0)) throw std::invalid_argument("PhaseSpaceField: nonpositive total mass");
        for (double& v : f) v /= m;
    }
};

/// Velocity moment fields of a phase-space density: rho, flow velocity V
/// and the (scalar, 1D) pressure Pi.
struct MomentFields {
    SpaceGrid grid;
    std::vector<double> rho;
    std::vector<double> V;
    std::vector<double> Pi;
};

} // namespace qbd::pde
