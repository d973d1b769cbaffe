#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <random>

namespace mntd {

// Deterministic random source with portable output. std::mt19937_64 is fully
// specified by the standard; the helpers below avoid the std::uniform_*
// distributions, whose sequences are implementation-defined and would break
// bit-identical reproducibility across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [lo, hi), built from the top 53 bits.
    double uniform(double lo, double hi) {
        const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + unit * (hi - lo);
    }

    // Uniform integer in [0, n); rejection keeps the result exactly unbiased.
    std::uint64_t below(std::uint64_t n) {
        assert(n > 0);
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t draw = engine_();
        while (draw >= limit) draw = engine_();
        return draw % n;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace mntd
