#include "qbd/analysis/thermo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qbd::analysis {

double classical_reduction_temperature(const BathParams& params) {
    params.validate();
    if (params.tau == 0.0)
        throw std::domain_error("classical_reduction_temperature: tau = 0 has no finite T*");
    return 0.5 * params.hbar * std::sqrt(params.gamma / (3.0 * params.tau));
}

UniversalTD universal_TD(const BathParams& params, const ConstantsTable& t) {
    if (!(params.m > 0.0) || !(params.gamma > 0.0))
        throw std::invalid_argument("universal_TD: m and gamma must be > 0");
    UniversalTD out;
    out.tau = t.e * t.e /
              (6.0 * std::numbers::pi * t.eps0 * params.m * t.c * t.c * t.c);
    out.T_star = 0.5 * t.hbar_SI * std::sqrt(params.gamma / (3.0 * out.tau)) / t.kB_SI;
    out.D = t.kB_SI * out.T_star / (params.m * params.gamma);
    out.product = out.T_star * out.D;
    out.reference = t.hbar_SI * t.c * t.c / (8.0 * t.kB_SI * t.alpha);
    out.relative_deviation = std::fabs(out.product - out.reference) / out.reference;
    return out;
}

} // namespace qbd::analysis
