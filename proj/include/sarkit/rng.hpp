#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "sarkit/errors.hpp"

namespace sarkit {

/// Seeded 64-bit generator behind every randomized operation. Bounded draws
/// use explicit rejection so a seed always replays the same sequence,
/// independent of standard-library distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform in [0, n).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw InvalidSize("Rng::below(0)");
        constexpr std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t bound = max - max % n;  // multiple of n
        for (;;) {
            const std::uint64_t x = gen_();
            if (x < bound) return x % n;
        }
    }

    /// Uniform integer in [lo, hi] inclusive.
    int range(int lo, int hi) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform real in [0, 1).
    double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 gen_;
};

}  // namespace sarkit
