#pragma once

#include <cstdint>

namespace ramt::detail {

// splitmix64: tiny, seedable, identical output on every platform. Used where
// serialized artifacts or documented determinism depend on the stream.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n); n must be > 0. Modulo bias is irrelevant here.
    uint64_t below(uint64_t n) { return next() % n; }

    // Uniform in [-1, 1).
    double symmetric() {
        return static_cast<double>(next() >> 11) * (1.0 / 4503599627370496.0) *
                   2.0 -
               1.0;
    }

private:
    uint64_t state_;
};

}  // namespace ramt::detail
