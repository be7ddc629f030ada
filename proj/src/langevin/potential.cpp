#include "qbd/langevin/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbd::langevin {

void Tabulated::prepare() const {
    if (!spline_m.empty() || order != 3) return;
    const std::size_t n = values.size();
    if (n != grid.points)
        throw std::invalid_argument("Tabulated: value count does not match grid");
    if (n < 4) throw std::invalid_argument("Tabulated: need at least 4 samples");
    // Natural cubic spline on a uniform grid: second derivatives M solve the
    // tridiagonal system M_{i-1} + 4 M_i + M_{i+1} = 6 d2y_i, M_0 = M_{n-1} = 0.
    const double h = grid.spacing();
    std::vector<double> m(n, 0.0);
    const std::size_t inner = n - 2;
    std::vector<double> diag(inner, 4.0), rhs(inner, 0.0);
    for (std::size_t i = 0; i < inner; ++i)
        rhs[i] = 6.0 * (values[i + 2] - 2.0 * values[i + 1] + values[i]) / (h * h);
    for (std::size_t i = 1; i < inner; ++i) { // Thomas sweep, off-diagonals = 1
        const double w = 1.0 / diag[i - 1];
        diag[i] -= w;
        rhs[i] -= w * rhs[i - 1];
    }
    m[inner] = rhs[inner - 1] / diag[inner - 1];
    for (std::size_t i = inner - 1; i-- > 0;)
        m[i + 1] = (rhs[i] - m[i + 2]) / diag[i];
    spline_m = std::move(m);
}

namespace {

double tab_value(const Tabulated& t, double x) {
    const double h = t.grid.spacing();
    const double x0 = t.grid.pos(0);
    const double xmax = t.grid.pos(t.grid.points - 1);
    x = std::clamp(x, x0, xmax);
    std::size_t i = static_cast<std::size_t>((x - x0) / h);
    if (i + 1 >= t.grid.points) i = t.grid.points - 2;
    const double s = (x - (x0 + static_cast<double>(i) * h)) / h;
    if (t.order == 1) return (1.0 - s) * t.values[i] + s * t.values[i + 1];
    t.prepare();
    const double mi = t.spline_m[i], mi1 = t.spline_m[i + 1];
    const double a = 1.0 - s;
    return a * t.values[i] + s * t.values[i + 1] +
           (h * h / 6.0) * ((a * a * a - a) * mi + (s * s * s - s) * mi1);
}

double tab_slope(const Tabulated& t, double x) {
    const double h = t.grid.spacing();
    const double x0 = t.grid.pos(0);
    const double xmax = t.grid.pos(t.grid.points - 1);
    if (x <= x0 || x >= xmax) return 0.0; // clamped outside the table
    std::size_t i = static_cast<std::size_t>((x - x0) / h);
    if (i + 1 >= t.grid.points) i = t.grid.points - 2;
    const double s = (x - (x0 + static_cast<double>(i) * h)) / h;
    if (t.order == 1) return (t.values[i + 1] - t.values[i]) / h;
    t.prepare();
    const double mi = t.spline_m[i], mi1 = t.spline_m[i + 1];
    const double a = 1.0 - s;
    return (t.values[i + 1] - t.values[i]) / h +
           (h / 6.0) * ((3.0 * s * s - 1.0) * mi1 - (3.0 * a * a - 1.0) * mi);
}

} // namespace

double potential_energy(const Potential& u, std::span<const double> r) {
    return std::visit(
        [&](const auto& pot) -> double {
            using P = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<P, Free>) {
                return 0.0;
            } else if constexpr (std::is_same_v<P, Harmonic>) {
                double s = 0.0;
                for (std::size_t i = 0; i < r.size(); ++i) {
                    const double x = r[i] - pot.center[i];
                    s += x * x;
                }
                return 0.5 * pot.k * s;
            } else if constexpr (std::is_same_v<P, DoubleWell>) {
                double s = 0.0;
                for (double x : r) s += 0.25 * pot.a * x * x * x * x - 0.5 * pot.b * x * x;
                return s;
            } else {
                if (r.size() != 1)
                    throw std::invalid_argument("Tabulated potential is 1D only");
                return tab_value(pot, r[0]);
            }
        },
        u);
}

void potential_gradient(const Potential& u, std::span<const double> r, std::span<double> out) {
    std::visit(
        [&](const auto& pot) {
            using P = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<P, Free>) {
                for (auto& g : out) g = 0.0;
            } else if constexpr (std::is_same_v<P, Harmonic>) {
                for (std::size_t i = 0; i < r.size(); ++i)
                    out[i] = pot.k * (r[i] - pot.center[i]);
            } else if constexpr (std::is_same_v<P, DoubleWell>) {
                for (std::size_t i = 0; i < r.size(); ++i)
                    out[i] = pot.a * r[i] * r[i] * r[i] - pot.b * r[i];
            } else {
                if (r.size() != 1)
                    throw std::invalid_argument("Tabulated potential is 1D only");
                out[0] = tab_slope(pot, r[0]);
            }
        },
        u);
}

double potential_max_curvature(const Potential& u, double r_scale) {
    return std::visit(
        [&](const auto& pot) -> double {
            using P = std::decay_t<decltype(pot)>;
            if constexpr (std::is_same_v<P, Free>) {
                return 0.0;
            } else if constexpr (std::is_same_v<P, Harmonic>) {
                return std::fabs(pot.k);
            } else if constexpr (std::is_same_v<P, DoubleWell>) {
                // |U''| = |3 a x^2 - b| probed over the accessible range
                const double x = std::max(r_scale, std::sqrt(std::fabs(pot.b / pot.a)));
                return std::max(std::fabs(3.0 * pot.a * x * x - pot.b), std::fabs(pot.b));
            } else {
                pot.prepare();
                double c = 0.0;
                if (pot.order == 3) {
                    for (double m : pot.spline_m) c = std::max(c, std::fabs(m));
                } else {
                    const double h = pot.grid.spacing();
                    for (std::size_t i = 1; i + 1 < pot.values.size(); ++i)
                        c = std::max(c, std::fabs(pot.values[i + 1] - 2.0 * pot.values[i] +
                                                  pot.values[i - 1]) /
                                            (h * h));
                }
                return c;
            }
        },
        u);
}

} // namespace qbd::langevin
