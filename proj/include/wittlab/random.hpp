#pragma once

/**
 * @file random.hpp
 * @brief Seeded sampling with output that is identical on every platform.
 *
 * std::uniform_int_distribution is implementation-defined, so bounded draws are
 * done here by rejection on raw mt19937_64 output.
 */

#include <cstdint>
#include <random>

namespace wittlab {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % n;
    }

    /// Uniform in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool coin() { return (engine_() >> 63U) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace wittlab
