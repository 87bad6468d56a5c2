#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qubus {

// Counter-based random stream built on the splitmix64 finalizer.
//
// Streams are cheap values: `RngStream::substream(master, k)` derives the
// stream for trial k from the master seed alone, so Monte Carlo trials
// produce identical draws no matter which thread runs them or in what
// order. This is the seeding contract relied on by all simulation code.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(mix(seed ^ kSalt)) {}

    static RngStream substream(std::uint64_t master_seed, std::uint64_t index) {
        RngStream s(0);
        s.state_ = mix(mix(master_seed ^ kSalt) + kGolden * (index + 1));
        return s;
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    // Uniform double in [0, 1), 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (cosine half; no cached state).
    double gaussian() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
    static constexpr std::uint64_t kSalt = 0x8C72A6156EB51DBEull;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace qubus
