#include "qbd/pde/resolvent.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qbd/core/fft.hpp"

namespace qbd::pde {

namespace {

/// Symmetric banded Cholesky (bandwidth kd) of an SPD matrix stored as
/// bands[d][i] = A[i+d][i], d = 0..kd.
class BandedCholesky {
public:
    BandedCholesky(std::vector<std::vector<double>> bands, std::size_t n, std::size_t kd)
        : l_(std::move(bands)), n_(n), kd_(kd) {
        for (std::size_t j = 0; j < n_; ++j) {
            double diag = l_[0][j];
            const std::size_t kstart = (j >= kd_) ? j - kd_ : 0;
            for (std::size_t k = kstart; k < j; ++k) {
                const double ljk = l_[j - k][k];
                diag -= ljk * ljk;
            }
            if (!(diag > 0.0))
                throw std::runtime_error("BiharmonicResolvent: matrix not positive definite");
            l_[0][j] = std::sqrt(diag);
            for (std::size_t d = 1; d <= kd_ && j + d < n_; ++d) {
                const std::size_t i = j + d;
                double v = l_[d][j];
                const std::size_t ks = (i >= kd_) ? i - kd_ : 0;
                for (std::size_t k = ks; k < j; ++k)
                    v -= l_[i - k][k] * l_[j - k][k];
                l_[d][j] = v / l_[0][j];
            }
        }
    }

    void solve(std::vector<double>& b) const {
        for (std::size_t i = 0; i < n_; ++i) { // L y = b
            double v = b[i];
            const std::size_t ks = (i >= kd_) ? i - kd_ : 0;
            for (std::size_t k = ks; k < i; ++k) v -= l_[i - k][k] * b[k];
            b[i] = v / l_[0][i];
        }
        for (std::size_t ii = n_; ii-- > 0;) { // L^T x = y
            double v = b[ii];
            for (std::size_t d = 1; d <= kd_ && ii + d < n_; ++d)
                v -= l_[d][ii] * b[ii + d];
            b[ii] = v / l_[0][ii];
        }
    }

private:
    std::vector<std::vector<double>> l_;
    std::size_t n_, kd_;
};

} // namespace

struct BiharmonicResolvent::Impl {
    std::size_t n = 0;
    double c = 0.0;
    double dr = 1.0;
    bool periodic = true;
    std::unique_ptr<BandedCholesky> chol;
};

BiharmonicResolvent::BiharmonicResolvent(std::size_t n, double c, double dr, bool periodic)
    : impl_(std::make_unique<Impl>()) {
    impl_->n = n;
    impl_->c = c;
    impl_->dr = dr;
    impl_->periodic = periodic;
    if (c <= 0.0 || periodic) return;

    // flux-form Neumann Laplacian (symmetric, row sums zero)
    auto lap = [&](const std::vector<double>& x, std::vector<double>& y) {
        const double inv = 1.0 / (dr * dr);
        for (std::size_t j = 0; j < n; ++j) {
            const double up = (j + 1 < n) ? x[j + 1] - x[j] : 0.0;
            const double lo = (j > 0) ? x[j] - x[j - 1] : 0.0;
            y[j] = (up - lo) * inv;
        }
    };
    // bands of I + c * D2^2 by local impulse probing (stencil width 2)
    std::vector<std::vector<double>> bands(3, std::vector<double>(n, 0.0));
    std::vector<double> e(n, 0.0), t1(n), t2(n);
    for (std::size_t j = 0; j < n; ++j) {
        e.assign(n, 0.0);
        e[j] = 1.0;
        lap(e, t1);
        lap(t1, t2);
        bands[0][j] = 1.0 + c * t2[j];
        if (j + 1 < n) bands[1][j] = c * t2[j + 1];
        if (j + 2 < n) bands[2][j] = c * t2[j + 2];
    }
    impl_->chol = std::make_unique<BandedCholesky>(std::move(bands), n, 2);
}

BiharmonicResolvent::~BiharmonicResolvent() = default;
BiharmonicResolvent::BiharmonicResolvent(BiharmonicResolvent&&) noexcept = default;
BiharmonicResolvent& BiharmonicResolvent::operator=(BiharmonicResolvent&&) noexcept = default;

std::vector<double> BiharmonicResolvent::solve(const std::vector<double>& u) const {
    if (u.size() != impl_->n)
        throw std::invalid_argument("BiharmonicResolvent: size mismatch");
    if (impl_->c <= 0.0) return u;
    if (impl_->periodic) {
        auto spec = rfft(u);
        const double dr = impl_->dr;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            const double x = 2.0 * std::numbers::pi * static_cast<double>(k) /
                             static_cast<double>(impl_->n);
            const double sigma = (2.0 - 2.0 * std::cos(x)) / (dr * dr);
            spec[k] /= 1.0 + impl_->c * sigma * sigma;
        }
        return irfft(spec, impl_->n);
    }
    std::vector<double> v = u;
    impl_->chol->solve(v);
    return v;
}

} // namespace qbd::pde
