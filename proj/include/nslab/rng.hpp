#pragma once

#include <cmath>
#include <cstdint>

namespace nslab {

// Counter-based generator: each draw is a pure function of (seed, counter),
// so evaluation order, threading, and restarts cannot change a run's
// randomness. The mixer is the splitmix64 finalizer over a Weyl sequence.
struct CounterRng {
    std::uint64_t seed = 0;

    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform on [0,1)
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; draw c consumes counters 2c and 2c+1
    double gaussian(std::uint64_t counter) const {
        double u1 = uniform(2 * counter);
        double u2 = uniform(2 * counter + 1);
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // derive an independent stream, e.g. one per field component
    CounterRng stream(std::uint64_t tag) const {
        CounterRng r;
        r.seed = bits(0xD1B54A32D192ED03ull ^ tag);
        return r;
    }
};

}  // namespace nslab
