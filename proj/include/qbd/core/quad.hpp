#pragma once

#include <functional>

namespace qbd {

struct QuadResult {
    double value = 0.0;
    double abserr = 0.0;
    int subdivisions = 0;
};

/// Globally adaptive quadrature on [a, b] with a 15-point Kronrod rule and
/// embedded 7-point Gauss error estimate. The worst interval (largest error
/// estimate) is bisected until the accumulated error satisfies
/// err <= max(abs_tol, rel_tol*|value|) or max_subdiv is reached.
QuadResult integrate_gk(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-12, double rel_tol = 1e-12,
                        int max_subdiv = 4000);

} // namespace qbd
