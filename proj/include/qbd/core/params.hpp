#pragma once

#include <stdexcept>
#include <string>

namespace qbd {

/// Physical parameters of the bath-particle system. Units are "reduced SI":
/// any consistent system with k_B = 1, i.e. temperature is stored as the
/// thermal energy k_B*T. hbar = 0 and tau = 0 select the classical
/// white-noise limit; T must stay strictly positive.
struct BathParams {
    double m = 1.0;      // particle mass
    double gamma = 1.0;  // friction rate, 1/time
    double tau = 0.0;    // radiation-reaction time constant
    double T = 1.0;      // thermal energy k_B*T
    double hbar = 0.0;   // reduced action quantum
    int d = 1;           // spatial dimension, 1..3

    double beta() const { return 1.0 / T; }

    /// Dimensionless quantum-friction group theta = beta*hbar*gamma.
    double theta() const { return hbar * gamma / T; }

    bool classical() const { return hbar == 0.0; }

    void validate() const {
        if (!(m > 0.0)) throw std::invalid_argument("BathParams: m must be > 0");
        if (!(gamma > 0.0)) throw std::invalid_argument("BathParams: gamma must be > 0");
        if (!(tau >= 0.0)) throw std::invalid_argument("BathParams: tau must be >= 0");
        if (!(T > 0.0)) throw std::invalid_argument("BathParams: T must be > 0");
        if (!(hbar >= 0.0)) throw std::invalid_argument("BathParams: hbar must be >= 0");
        if (d < 1 || d > 3) throw std::invalid_argument("BathParams: d must be 1, 2 or 3");
    }
};

} // namespace qbd
