#pragma once

#include <cstdint>
#include <string_view>

namespace qrp {

// SplitMix64 (Steele, Lea, Flood 2014): a counter-based generator whose k-th
// output depends only on (seed, k). Outputs are stable across platforms.
class SplitMix64 {
public:
    static constexpr std::string_view kName = "splitmix64-v1";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

} // namespace qrp
