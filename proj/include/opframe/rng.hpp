#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace opframe {

/// Deterministic 64-bit counter-based generator (SplitMix64).
///
/// Output i is a pure function of (seed, i): the state walks seed + i*gamma and
/// each draw finalizes the current state with the SplitMix64 mixer, so streams
/// are reproducible across platforms and runs.  Gaussians come from Box-Muller
/// on consecutive uniforms; a complex draw is N(0,1) + i*N(0,1).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]; never 0, so log() below is safe.
    double uniform01() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    std::complex<double> complex_gaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Derives a stream seed from a base seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    Rng r(base ^ (0xD1B54A32D192ED03ull * (stream + 1)));
    return r.next_u64();
}

}  // namespace opframe
