#include "qbd/operators/bohm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qbd::ops {

QuantumPotentialField bohm_potential(const pde::DensityField& rho, const BathParams& params) {
    rho.validate();
    params.validate();
    const std::size_t m = rho.grid.points;
    QuantumPotentialField q{rho.grid, std::vector<double>(m, 0.0)};
    if (params.hbar == 0.0) return q;

    const double rho_max = *std::max_element(rho.rho.begin(), rho.rho.end());
    if (!(rho_max > 0.0))
        throw std::invalid_argument("bohm_potential: density is not positive");
    const double floor = 1e-12 * rho_max;
    for (std::size_t j = 0; j < m; ++j) {
        if (rho.rho[j] < floor)
            throw std::invalid_argument("bohm_potential: degenerate density at cell " +
                                        std::to_string(j));
    }

    std::vector<double> s(m);
    for (std::size_t j = 0; j < m; ++j) s[j] = std::sqrt(rho.rho[j]);

    const double dr = rho.grid.spacing();
    const double scale = -params.hbar * params.hbar / (2.0 * params.m);
    const double inv_dr2 = 1.0 / (dr * dr);

    auto second = [&](std::size_t j) -> double {
        if (rho.grid.periodic) {
            const std::size_t jm = (j + m - 1) % m;
            const std::size_t jp = (j + 1) % m;
            return (s[jp] - 2.0 * s[j] + s[jm]) * inv_dr2;
        }
        if (j == 0) return (2.0 * s[0] - 5.0 * s[1] + 4.0 * s[2] - s[3]) * inv_dr2;
        if (j == m - 1)
            return (2.0 * s[m - 1] - 5.0 * s[m - 2] + 4.0 * s[m - 3] - s[m - 4]) * inv_dr2;
        return (s[j + 1] - 2.0 * s[j] + s[j - 1]) * inv_dr2;
    };

    for (std::size_t j = 0; j < m; ++j) q.values[j] = scale * second(j) / s[j];
    return q;
}

} // namespace qbd::ops
