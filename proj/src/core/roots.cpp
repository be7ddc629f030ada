#include "qbd/core/roots.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qbd {

RootResult brent(const std::function<double(double)>& f, double a, double b,
                 double xtol_abs, double xtol_rel, int max_iter) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return {a, fa, 0};
    if (fb == 0.0) return {b, fb, 0};
    if (std::copysign(1.0, fa) == std::copysign(1.0, fb))
        throw std::invalid_argument("brent: endpoints do not bracket a root");

    const double eps = std::numeric_limits<double>::epsilon();
    double c = a, fc = fa;
    double d = b - a, e = d;
    int iter = 0;
    while (iter < max_iter) {
        ++iter;
        if (std::copysign(1.0, fb) == std::copysign(1.0, fc)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double xm = 0.5 * (c - b);
        const double tol1 = 2.0 * eps * std::fabs(b) + 0.5 * (xtol_abs + xtol_rel * std::fabs(b));
        if (std::fabs(xm) <= tol1 || fb == 0.0) break;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            const double s = fb / fa;
            double p, q;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                q = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : std::copysign(tol1, xm);
        fb = f(b);
    }
    return {b, fb, iter};
}

bool expand_bracket(const std::function<double(double)>& f, double& a, double& b,
                    int max_expand) {
    double fa = f(a);
    double fb = f(b);
    for (int i = 0; i < max_expand; ++i) {
        if (std::copysign(1.0, fa) != std::copysign(1.0, fb)) return true;
        const double w = b - a;
        if (std::fabs(fa) < std::fabs(fb)) {
            a -= w;
            fa = f(a);
        } else {
            b += w;
            fb = f(b);
        }
    }
    return std::copysign(1.0, fa) != std::copysign(1.0, fb);
}

} // namespace qbd
