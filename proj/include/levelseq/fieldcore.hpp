#pragma once

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace levelseq {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// An odd prime p together with its binary digits, p = sum digits[i] * 2^i.
struct PrimeDesc {
    u64 p = 0;
    unsigned k = 0;                    // top bit index: 2^k <= p < 2^(k+1)
    std::vector<std::uint8_t> digits;  // p_0 .. p_k, least significant first
    std::optional<unsigned> i0;        // smallest i with digits[i] == 0; empty iff p = 2^(k+1)-1

    bool is_mersenne() const { return !i0.has_value(); }

    // Validates that p is an odd prime and fills the derived fields.
    static PrimeDesc from_prime(u64 p);
};

// A modulus of the form 2^n - a with 0 < a < 2^(n-1). For n == 64 the
// composed value has no wider home; modulus() returns the wrapped word
// 0 - a, which equals 2^64 - a as an unsigned value.
struct PseudoMersenneDesc {
    unsigned n = 0;
    u64 a = 0;
    bool prime = false;

    u64 modulus() const { return n == 64 ? 0 - a : (u64(1) << n) - a; }
    static PseudoMersenneDesc make(unsigned n, u64 a);
    static PseudoMersenneDesc from_prime(const PrimeDesc& pd);
};

// Residues are plain u64 values in [0, p); the operations below keep them
// canonical. Everything here is a pure function, safe to call concurrently.

inline u64 fe_add(const PrimeDesc& pd, u64 x, u64 y) {
    assert(x < pd.p && y < pd.p);
    u64 s = x + y;
    // The sum wraps for p > 2^63; the wrapped difference s - p is still exact.
    u64 over = static_cast<u64>(s < x) | static_cast<u64>(s >= pd.p);
    return s - (pd.p & (0 - over));
}

// 128-bit product, hardware reduction.
inline u64 fe_mul(const PrimeDesc& pd, u64 x, u64 y) {
    assert(x < pd.p && y < pd.p);
    return static_cast<u64>(static_cast<u128>(x) * y % pd.p);
}

inline u64 fe_neg(const PrimeDesc& pd, u64 x) {
    assert(x < pd.p);
    return x == 0 ? 0 : pd.p - x;
}

// Folding reduction of a value x < p^2 modulo 2^n - a. Each fold rewrites
// x = h*2^n + l as h*a + l, i.e. subtracts h*p, so the residue class is
// unchanged and x strictly decreases while h > 0; h*a stays inside 128 bits
// because h < 2^(128-n) and a < 2^(n-1). Offsets with a^2 + a < 2^n exit
// within two folds; larger offsets shed n - bit_width(a) bits per round.
// Once x < 2^n, one subtraction suffices since a < 2^(n-1) forces 2^n < 2p.
inline u64 reduce_pseudo_mersenne(const PseudoMersenneDesc& pm, u128 x) {
    const unsigned n = pm.n;
    const u64 a = pm.a;
    const u64 p = pm.modulus();
    if (n == 64) {
        while ((x >> 64) != 0) x = (x >> 64) * a + static_cast<u64>(x);
        u64 r = static_cast<u64>(x);
        return r >= p ? r - p : r;
    }
    const u64 mask = (u64(1) << n) - 1;
    while ((x >> 64) != 0) {
        x = (x >> n) * static_cast<u128>(a) + (static_cast<u64>(x) & mask);
    }
    u64 v = static_cast<u64>(x);
    while ((v >> n) != 0) v = (v >> n) * a + (v & mask);
    return v >= p ? v - p : v;
}

// Carry-fold addition modulo a Mersenne prime 2^(k+1) - 1.
inline u64 mersenne_add(const PrimeDesc& pd, u64 x, u64 y) {
    if (!pd.is_mersenne()) throw std::domain_error("mersenne_add requires p = 2^(k+1) - 1");
    assert(x < pd.p && y < pd.p);
    u64 s = x + y;  // largest 64-bit Mersenne prime is 2^61 - 1, no wrap
    u64 r = (s >> (pd.k + 1)) + (s & pd.p);
    // The carry-fold can land exactly on p (e.g. x + y = p); keep residues canonical.
    return r == pd.p ? 0 : r;
}

// Multiplication by 2^s modulo a Mersenne prime: a left cyclic rotation of
// the (k+1)-bit word, with the all-ones word normalized to 0.
inline u64 mersenne_mul_pow2(const PrimeDesc& pd, u64 x, unsigned s) {
    if (!pd.is_mersenne()) throw std::domain_error("mersenne_mul_pow2 requires p = 2^(k+1) - 1");
    if (s > pd.k) throw std::out_of_range("shift must satisfy 0 <= s <= k");
    assert(x <= pd.p);
    if (s == 0) return x == pd.p ? 0 : x;
    // pd.p >> s masks the low k+1-s bits, so the left shift cannot overflow.
    u64 r = ((x & (pd.p >> s)) << s) | (x >> (pd.k + 1 - s));
    return r == pd.p ? 0 : r;
}

// Per-modulus dispatch between folded and hardware reduction. Addition never
// divides; multiplication folds when the offset is small enough that two
// folds replace a 128-bit division.
class FieldOps {
  public:
    explicit FieldOps(const PrimeDesc& pd);
    const PrimeDesc& desc() const { return pd_; }
    const PseudoMersenneDesc& pm() const { return pm_; }
    bool folds() const { return folds_; }

    u64 add(u64 x, u64 y) const { return fe_add(pd_, x, y); }
    u64 mul(u64 x, u64 y) const {
        u128 prod = static_cast<u128>(x) * y;
        return folds_ ? reduce_pseudo_mersenne(pm_, prod)
                      : static_cast<u64>(prod % pd_.p);
    }

  private:
    PrimeDesc pd_;
    PseudoMersenneDesc pm_;
    bool folds_;
};

}  // namespace levelseq
