#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ganet {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded generator with hand-rolled draw helpers. std::uniform_*_distribution
// is implementation-defined, so distributions are derived from raw mt19937_64
// output to keep streams bit-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, n). n must be > 0.
    std::size_t next_index(std::size_t n) {
        return static_cast<std::size_t>(next_double() * static_cast<double>(n));
    }

    bool next_bool(double p) { return next_double() < p; }

    std::uint8_t next_bit() { return static_cast<std::uint8_t>(gen_() >> 63); }

    // Box-Muller; consumes two uniforms per pair, caches the second value.
    double next_gaussian(double mean = 0.0, double sd = 1.0) {
        if (has_cached_) {
            has_cached_ = false;
            return mean + sd * cached_;
        }
        double u1 = 0.0;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(theta);
        has_cached_ = true;
        return mean + sd * r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Named sub-streams fanned out from the single user-facing seed, so each
// component can be re-run in isolation with reproducible draws.
enum class Stream : std::uint64_t {
    split = 1,
    ga = 2,
    datagen = 3,
};

inline Rng make_stream(std::uint64_t seed, Stream stream) {
    std::uint64_t state = seed ^ (0xa076bc9d2fff1234ULL * static_cast<std::uint64_t>(stream));
    const std::uint64_t derived = splitmix64(state);
    return Rng(derived);
}

} // namespace ganet
