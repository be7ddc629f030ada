#pragma once

#include <cstddef>
#include <vector>

namespace qbd::pde {

/// Thomas algorithm; diag and rhs are clobbered, lower/upper read only.
inline void thomas(const std::vector<double>& lower, std::vector<double>& diag,
                   const std::vector<double>& upper, std::vector<double>& rhs,
                   std::vector<double>& x) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    x.resize(n);
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
}

/// Cyclic tridiagonal solve (Sherman-Morrison rank-1 correction).
/// corner_hi = A[0][n-1], corner_lo = A[n-1][0].
inline void thomas_cyclic(const std::vector<double>& lower, const std::vector<double>& diag,
                          const std::vector<double>& upper, double corner_lo, double corner_hi,
                          const std::vector<double>& rhs, std::vector<double>& x) {
    const std::size_t n = diag.size();
    const double sigma = -diag[0];
    std::vector<double> d(diag);
    d[0] -= sigma;
    d[n - 1] -= corner_hi * corner_lo / sigma;
    std::vector<double> u(n, 0.0);
    u[0] = sigma;
    u[n - 1] = corner_lo;

    std::vector<double> dd(d), rr(rhs), y;
    thomas(lower, dd, upper, rr, y);
    std::vector<double> dd2(d), uu(u), z;
    thomas(lower, dd2, upper, uu, z);

    const double vy = y[0] + (corner_hi / sigma) * y[n - 1];
    const double vz = z[0] + (corner_hi / sigma) * z[n - 1];
    const double factor = vy / (1.0 + vz);
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];
}

} // namespace qbd::pde
