#pragma once

#include <cmath>
#include <cstdint>

namespace vlcloc {

/// Counter-seeded PRNG (splitmix64 core) with portable uniform and normal
/// draws. std::random distributions are not bit-identical across standard
/// library implementations, so all draws are generated here directly.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Gaussian via Box-Muller; consumes exactly two uniform draws.
    double normal(double mean, double sigma) {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::uint64_t state_;
};

/// Mixes (base_seed, run_id, row) into an independent stream seed so rows
/// can be generated in any order, on any number of threads, with identical
/// results.
inline std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t run_id,
                                 std::uint64_t row) {
    auto mix = [](std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    std::uint64_t s = mix(base_seed + 0x9E3779B97F4A7C15ULL);
    s = mix(s ^ (run_id + 0xD1B54A32D192ED03ULL));
    s = mix(s ^ (row + 0x8CB92BA72F3D8DD7ULL));
    return s;
}

}  // namespace vlcloc
