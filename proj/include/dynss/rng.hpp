#pragma once

#include <cmath>
#include <cstdint>

namespace dynss {

// Deterministic RNG with hand-rolled uniform/normal draws. std::mt19937_64
// supplies the bit stream; the value transforms are pinned here so output
// sequences do not depend on the standard library's distribution internals.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64_init(seed)) {}

    std::uint64_t next_u64() {
        // xorshift* variant seeded through splitmix64.
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545F4914F6CDD1DULL;
    }

    // Uniform on [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (cosine branch only; deterministic).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // Derive an independent stream for a tagged sub-task.
    Rng split(std::uint64_t tag) const {
        return Rng(splitmix64_init(state_ ^ (tag * 0x9E3779B97F4A7C15ULL)));
    }

  private:
    static std::uint64_t splitmix64_init(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        x = x ^ (x >> 31);
        return x == 0 ? 0x1234567887654321ULL : x;
    }

    std::uint64_t state_;
};

}  // namespace dynss
