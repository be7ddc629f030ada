#pragma once

namespace qbd {

/// SI physical constants, CODATA 2018 / SI-2019 redefinition.
///
/// c, e, hbar (via h), and kB are exact by definition since the 2019 SI.
/// alpha is the CODATA 2018 recommended value. eps0 is no longer a defined
/// constant; it is derived here from alpha via eps0 = e^2/(4*pi*alpha*hbar*c),
/// which keeps the table internally consistent to machine precision.
struct ConstantsTable {
    double c;        // speed of light, m/s (exact)
    double e;        // elementary charge, C (exact)
    double eps0;     // vacuum permittivity, F/m (derived from alpha)
    double hbar_SI;  // reduced Planck constant, J*s (h exact, hbar = h/2pi)
    double kB_SI;    // Boltzmann constant, J/K (exact)
    double alpha;    // fine-structure constant (CODATA 2018)
};

ConstantsTable constants();

} // namespace qbd
