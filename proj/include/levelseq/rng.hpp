#pragma once

#include <bit>
#include <cstdint>
#include <random>

namespace levelseq {

// Mask-rejection draw in [0, bound). mt19937_64 output is pinned by the
// standard, so seeded runs reproduce everywhere.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound < 2) return 0;
    std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    for (;;) {
        std::uint64_t v = rng() & mask;
        if (v < bound) return v;
    }
}

}  // namespace levelseq
