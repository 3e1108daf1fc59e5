#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace graphrl {

// Seeded 64-bit generator with platform-independent derived draws.
// std::*_distribution output is implementation-defined, so the few
// distributions we need are written out here.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Unbiased integer in [0, n); n must be positive.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    // k distinct values from [0, n) in draw order (Floyd's algorithm).
    std::vector<std::uint64_t> sample_without_replacement(std::uint64_t n, std::uint64_t k);

    bool operator==(const Rng&) const = default;

private:
    std::mt19937_64 engine_;
};

}  // namespace graphrl
