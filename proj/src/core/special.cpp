#include "qbd/core/special.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace qbd {

namespace {
// Threshold below which the Laurent expansion of coth wins over the
// exponential form; keeps the relative error below ~1e-14 on both branches.
constexpr double kCothSmall = 1e-4;
} // namespace

double coth_stable(double x) {
    if (x == 0.0) throw std::domain_error("coth_stable: x = 0 is a pole");
    if (std::isnan(x)) throw std::domain_error("coth_stable: x is NaN");
    const double ax = std::fabs(x);
    double v;
    if (ax < kCothSmall) {
        v = 1.0 / ax + ax / 3.0 - ax * ax * ax / 45.0;
    } else {
        // coth(a) = 1 + 2/(e^{2a} - 1); expm1 saturates to inf for large a,
        // driving the correction to exactly 0.
        v = 1.0 + 2.0 / std::expm1(2.0 * ax);
    }
    return std::copysign(v, x);
}

double xcoth(double x) {
    const double ax = std::fabs(x);
    if (ax < kCothSmall) {
        const double x2 = ax * ax;
        return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
    }
    return ax * (1.0 + 2.0 / std::expm1(2.0 * ax));
}

namespace {

// B_0..B_{2*cap} via the defining recurrence
//   sum_{k=0}^{n} C(n+1, k) B_k = 0,  B_0 = 1
// carried out in exact rational arithmetic and cached once.
const std::vector<Rational>& bernoulli_table() {
    static std::vector<Rational> table;
    static std::once_flag flag;
    std::call_once(flag, [] {
        const int n_top = 2 * kBernoulliEvenCap;
        std::vector<Rational> b(static_cast<std::size_t>(n_top) + 1);
        b[0] = 1;
        using Int = boost::multiprecision::cpp_int;
        for (int n = 1; n <= n_top; ++n) {
            // binom accumulates C(n+1, k) incrementally.
            Int binom = 1; // C(n+1, 0)
            Rational acc = 0;
            for (int k = 0; k < n; ++k) {
                acc += Rational(binom) * b[static_cast<std::size_t>(k)];
                binom = binom * (n + 1 - k) / (k + 1);
            }
            // binom is now C(n+1, n) = n+1
            b[static_cast<std::size_t>(n)] = -acc / Rational(binom);
        }
        table.resize(static_cast<std::size_t>(kBernoulliEvenCap) + 1);
        for (int i = 0; i <= kBernoulliEvenCap; ++i)
            table[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(2 * i)];
    });
    return table;
}

} // namespace

std::vector<Rational> bernoulli_even_exact(int n_max) {
    if (n_max < 0) throw std::invalid_argument("bernoulli_even: n_max must be >= 0");
    if (n_max > kBernoulliEvenCap)
        throw std::invalid_argument("bernoulli_even: n_max exceeds the documented cap of 30");
    const auto& table = bernoulli_table();
    return {table.begin(), table.begin() + n_max + 1};
}

std::vector<double> bernoulli_even(int n_max) {
    const auto exact = bernoulli_even_exact(n_max);
    std::vector<double> out(exact.size());
    for (std::size_t i = 0; i < exact.size(); ++i)
        out[i] = static_cast<double>(exact[i]);
    return out;
}

} // namespace qbd
