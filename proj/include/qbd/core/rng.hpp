#pragma once

#include <cstdint>
#include <random>

namespace qbd {

/// SplitMix64 step; used only to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Splittable counter scheme: the stream for (seed, realization, component)
/// is seeded by three chained SplitMix64 absorptions. Distinct triples give
/// independent, reproducible streams on every platform.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t realization,
                                 std::uint64_t component) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s = h ^ (realization * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    h = splitmix64(s);
    s = h ^ (component * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL);
    return splitmix64(s);
}

/// Standard-normal stream with an explicit Box-Muller transform on top of
/// mt19937_64 (the mt19937_64 sequence is fully specified by the standard,
/// so trajectories are bit-identical across platforms).
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    /// Uniform on (0, 1].
    double uniform_pos() {
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qbd
