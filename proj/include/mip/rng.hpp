#ifndef MIP_RNG_HPP
#define MIP_RNG_HPP

#include <cstdint>

#include "mip/bytes.hpp"

namespace mip {

// SplitMix64: tiny, fully specified PRNG. Every randomized piece of the
// artifact (selftest, attacker keys, loss draws) uses it so runs are
// reproducible from a single seed.
class SplitMix64 {
public:
    constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // n bytes from consecutive draws, each emitted least-significant first.
    Bytes fill(std::size_t n) {
        Bytes out;
        out.reserve(n);
        while (out.size() < n) {
            std::uint64_t w = next();
            for (int i = 0; i < 8 && out.size() < n; ++i) {
                out.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
            }
        }
        return out;
    }

    std::uint64_t below(std::uint64_t bound) { return next() % bound; }

private:
    std::uint64_t state_;
};

}  // namespace mip

#endif
