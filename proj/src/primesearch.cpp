#include "levelseq/primesearch.hpp"

#include <bit>
#include <stdexcept>

namespace levelseq {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(u64 m) {
    if (m < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (m % q == 0) return m == q;
    }
    unsigned s = std::countr_zero(m - 1);
    u64 d = (m - 1) >> s;
    // This witness set decides primality for every m < 2^64.
    for (u64 w : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        u64 a = w % m;
        if (a == 0) continue;
        u64 x = powmod(a, d, m);
        if (x == 1 || x == m - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, m);
            if (x == m - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 compose_pseudo_mersenne(unsigned n, unsigned i) {
    if (n < 3 || n > 64) throw std::invalid_argument("bit width must be in [3, 64]");
    if (i + 2 > n) throw std::invalid_argument("offset exponent must satisfy i <= n - 2");
    u64 a = (u64(1) << i) + 1;
    return n == 64 ? 0 - a : (u64(1) << n) - a;
}

std::vector<unsigned> search_pseudo_mersenne(unsigned n) {
    if (n < 3 || n > 64) throw std::invalid_argument("bit width must be in [3, 64]");
    std::vector<unsigned> hits;
    // i = 0 gives an even modulus; start at 1. 2^i + 1 < 2^(n-1) caps i at n-2.
    for (unsigned i = 1; i + 2 <= n; ++i) {
        if (is_prime_u64(compose_pseudo_mersenne(n, i))) hits.push_back(i);
    }
    return hits;
}

}  // namespace levelseq
