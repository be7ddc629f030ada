#pragma once

#include <functional>

namespace qbd {

struct RootResult {
    double x = 0.0;
    double fx = 0.0;
    int iterations = 0;
};

/// Brent's method on a sign-changing bracket [a, b].
/// Throws std::invalid_argument when f(a) and f(b) have the same sign.
RootResult brent(const std::function<double(double)>& f, double a, double b,
                 double xtol_abs = 0.0, double xtol_rel = 1e-15, int max_iter = 200);

/// Expands [a, b] geometrically about its midpoint until f changes sign
/// across it. Returns false when max_expand doublings fail to bracket.
bool expand_bracket(const std::function<double(double)>& f, double& a, double& b,
                    int max_expand = 60);

} // namespace qbd
