#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace lipext {

/// Seedable generator with a platform-independent output stream.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the C++
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so every conversion to a real or bounded
/// integer is done here explicitly:
///   uniform01     = (x >> 11) * 2^-53
///   index(n)      = rejection sampling on the top bits
///   normal        = Box-Muller on two uniform01 draws
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool coin(double p = 0.5) { return uniform01() < p; }

    double normal() {
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    /// Derives an independent seed for stream `stream` (splitmix64 finalizer).
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace lipext
