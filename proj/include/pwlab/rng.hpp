#pragma once

#include <cstdint>
#include <random>

namespace pwlab {

// Deterministic uniform generator. mt19937_64 is seeded directly and the
// 53-bit mapping is spelled out instead of going through
// uniform_real_distribution, whose output is implementation-defined; the same
// seed must reproduce the same stream on every platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

private:
    std::mt19937_64 engine_;
};

} // namespace pwlab
