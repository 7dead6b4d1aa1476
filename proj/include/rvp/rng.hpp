#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rvp {

// Deterministic RNG used everywhere randomness is needed. All sampling goes
// through these helpers rather than std::*_distribution, whose output is
// implementation-defined; mt19937_64 itself produces a standardized sequence,
// so seeded runs are reproducible across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    // Uniform real in [lo, hi).
    double uniform_real(double lo, double hi) {
        const double unit = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + unit * (hi - lo);
    }

private:
    std::mt19937_64 engine_;
};

// FNV-1a over a string, folded onto a base seed. Per-sample seeds are derived
// this way so batch order and parallelism cannot affect outputs.
inline std::uint64_t hash_seed(std::uint64_t base, std::string_view key) {
    std::uint64_t h = 14695981039346656037ull ^ base;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t hash_seed(std::uint64_t base, std::string_view a, std::string_view b) {
    return hash_seed(hash_seed(base, a) * 1099511628211ull, b);
}

}  // namespace rvp
