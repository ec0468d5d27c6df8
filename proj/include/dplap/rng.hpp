#pragma once

#include <cstdint>

namespace dplap {

/// Counter-based generator: the k-th draw of stream s is a pure function of
/// (seed, s, k), so results do not depend on scheduling or platform.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix(seed ^ mix(stream + 0x632BE59BD9B4E019ull))) {}

    std::uint64_t next() noexcept { return mix(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Independent child generator.
    CounterRng split(std::uint64_t stream) const noexcept { return CounterRng(key_, stream); }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace dplap
