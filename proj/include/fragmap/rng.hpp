#pragma once

#include <cstdint>

namespace fragmap {

// SplitMix64. A fixed algorithm (rather than std::mt19937_64 +
// distributions, whose mapping is implementation-defined) so that a seed
// reproduces the same instance on any platform or language binding.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound). Plain modulo: the bias is negligible for the
    // bounds used here and keeps the mapping trivially portable.
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

    int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

private:
    std::uint64_t state_;
};

} // namespace fragmap
