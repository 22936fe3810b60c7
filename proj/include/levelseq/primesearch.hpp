#pragma once

#include <cstdint>
#include <vector>

namespace levelseq {

// Exact primality over the full 64-bit range (deterministic Miller-Rabin).
bool is_prime_u64(std::uint64_t m);

// The value 2^n - (2^i + 1). For n == 64 this is the wrapped word
// 0 - (2^i + 1), which equals 2^64 - (2^i + 1) as an unsigned value.
std::uint64_t compose_pseudo_mersenne(unsigned n, unsigned i);

// All i with 2^i + 1 < 2^(n-1) and 2^n - (2^i + 1) prime, ascending.
// Supported widths: 3 <= n <= 64 (small widths simply yield empty lists).
std::vector<unsigned> search_pseudo_mersenne(unsigned n);

}  // namespace levelseq
