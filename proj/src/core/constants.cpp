#include "qbd/core/constants.hpp"

#include <numbers>

namespace qbd {

ConstantsTable constants() {
    ConstantsTable t{};
    t.c = 299792458.0;             // exact
    t.e = 1.602176634e-19;         // exact
    const double h = 6.62607015e-34; // exact
    t.hbar_SI = h / (2.0 * std::numbers::pi);
    t.kB_SI = 1.380649e-23;        // exact
    t.alpha = 7.2973525693e-3;     // CODATA 2018
    t.eps0 = t.e * t.e / (4.0 * std::numbers::pi * t.alpha * t.hbar_SI * t.c);
    return t;
}

} // namespace qbd
