#pragma once

#include <span>
#include <string>
#include <vector>

#include "levelseq/fieldcore.hpp"

namespace levelseq {

// Monic characteristic polynomial x^n - c_{n-1} x^(n-1) - ... - c_0 over F_p,
// read as the recurrence a(t+n) = c_{n-1} a(t+n-1) + ... + c_0 a(t) mod p.
struct CharPoly {
    PrimeDesc pd;
    unsigned degree = 0;
    std::vector<u64> coeffs;  // c_0 .. c_{n-1}, canonical residues

    u64 order_size() const;    // p^n - 1; throws when >= 2^63
    std::string spec() const;  // "p:n:c0,c1,..."

    static CharPoly make(u64 p, std::vector<u64> coeffs);
    static CharPoly parse(const std::string& text);
};

// A materialized residue sequence. `period` is the full period p^n - 1;
// `terms` may hold any prefix length (>= period for rotation operations).
struct MSeq {
    CharPoly poly;
    std::vector<u64> terms;
    u64 period = 0;
};

// Prime factors with multiplicity, ascending. Valid for 2 <= m < 2^63.
std::vector<u64> factor_u64(u64 m);

// True iff the residue class of x in F_p[x]/(f) has multiplicative order
// exactly p^n - 1 (which forces f irreducible). Requires p^n - 1 < 2^63.
bool is_primitive(const CharPoly& f);

std::vector<u64> impulse_state(unsigned n);  // (0, ..., 0, 1)

// Plain linear recurring sequence; no primitivity requirement.
std::vector<u64> lrs_generate(const CharPoly& f, std::span<const u64> init, u64 count);

// m-sequence semantics: f must be primitive and init non-zero.
MSeq mseq_generate(const CharPoly& f, std::span<const u64> init, u64 count);

// b(t) = a(t + tau). Requires terms to hold at least one full period and
// 0 <= tau <= period (tau = period wraps to the identity).
MSeq mseq_shift(const MSeq& s, u64 tau);

// Termwise lambda * a(t) mod p, lambda != 0.
MSeq seq_scale(const MSeq& s, u64 lambda);

// Least divisor d of full_period such that the buffer is invariant under
// rotation by d. The buffer must hold exactly one full period.
u64 seq_period(std::span<const u64> terms, u64 full_period);
u64 seq_period(std::span<const std::uint8_t> bits, u64 full_period);

// Streaming generator for long outputs; picks the folded reduction when the
// modulus allows it.
class LrsStream {
  public:
    LrsStream(const CharPoly& f, std::span<const u64> init);
    u64 next();

  private:
    CharPoly poly_;
    FieldOps ops_;
    std::vector<u64> state_;
    std::size_t head_ = 0;
};

}  // namespace levelseq
