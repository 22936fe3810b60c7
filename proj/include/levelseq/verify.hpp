#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "levelseq/fieldcore.hpp"
#include "levelseq/lfsr.hpp"

namespace levelseq {

// Bookkeeping for one (lambda, i) pair: how often adding lambda flips bit i
// from 0 to 1, split at the wraparound boundary p - lambda, against the count
// of residues congruent to 2^i - 1 mod 2^(i+1).
struct CrossingCounts {
    u64 p = 0;
    u64 lambda = 0;
    unsigned level = 0;

    u64 x = 0, y = 0;  // lambda = x * 2^(i+1) + y
    u64 z = 0, w = 0;  // p      = z * 2^(i+1) + w

    u64 count_a = 0;     // residues a in [0, p) with a mod 2^(i+1) == 2^i - 1
    u64 count_low = 0;   // b in [0, p - lambda): bit i of b is 0 and of b + lambda is 1
    u64 count_high = 0;  // b in [p - lambda, p): same with b + lambda - p

    bool precond_lambda = false;  // bit i of lambda is 0
    bool precond_shift = false;   // bit i of p - lambda equals bit i of p - 1
    bool bi_p = false;            // bit i of p
    bool z_ge_x = false;

    // Closed-form predictions, evaluated only when both preconditions hold:
    //  bit i of p == 0:  (z - x) * y   and  x * (w - y),   with count_a == z
    //  bit i of p == 1:  (z - x + 1) * y and x * (2^(i+1) - w + y), count_a == z + 1
    std::optional<u64> closed_low;
    std::optional<u64> closed_high;
    bool closed_match = false;    // brute-force counts equal the closed forms
    bool identity_holds = false;  // count_a == count_low + count_high
};

struct VerificationReport {
    std::string check;
    u64 p = 0;
    unsigned n = 1;
    nlohmann::json params = nlohmann::json::object();
    bool verdict = false;
    nlohmann::json witnesses = nlohmann::json::array();
    double elapsed_ms = 0.0;
};

void to_json(nlohmann::json& j, const CrossingCounts& cc);
void to_json(nlohmann::json& j, const VerificationReport& r);

// At most this many counterexamples are recorded per failing key.
inline constexpr std::size_t kMaxWitnesses = 8;

// Exhaustively tests, per level i, whether bit i survives negation mod p for
// every residue; passes iff that happens exactly at i0 (nowhere for Mersenne p).
VerificationReport verify_lemma1(const PrimeDesc& pd);

// For every lambda in (1, p-1) and every level i, finds a residue whose bit i
// changes under multiplication by lambda; passes iff one exists for each pair.
// Requires p >= 5.
VerificationReport verify_lemma2(const PrimeDesc& pd);

// Brute-force crossing counts for one (lambda, i); 1 <= lambda <= p-1.
CrossingCounts count_level_crossings(const PrimeDesc& pd, u64 lambda, unsigned i);

// Sweeps all (lambda, i) for one p: closed forms must match brute force
// whenever the digit preconditions hold, and the count identity
// count_a == count_low + count_high must hold exactly at lambda = 1 and at
// (lambda = p-1, i = i0).
VerificationReport verify_crossings(const PrimeDesc& pd);

// Generates the impulse m-sequence and computes, per level i, the set of
// shifts whose level-i sequence matches the unshifted one. Passes iff the set
// is {0} for i != i0 and {0, T/2} for i = i0 ({0} everywhere for Mersenne p).
// Also checks that the half-period shift equals termwise negation.
VerificationReport verify_theorem(const CharPoly& f, u64 period_bound = 100000);

// Periods of all level sequences over one full period: T for i != i0 and
// T/2 for i = i0.
VerificationReport verify_period_corollary(const CharPoly& f, u64 period_bound = 100000);

// For a Mersenne modulus: splitting a = x * 2^i + y, multiplication by
// 2^(k+1-i) must give y * 2^(k+1-i) + x, moving bit i to bit 0. Exhaustive
// for p <= 8191; otherwise sample_budget seeded (a, i) draws.
VerificationReport verify_star_identity(const PrimeDesc& pd, u64 sample_budget = 1'000'000,
                                        u64 seed = 0);

// Fixed desk-scale instances covering Mersenne and non-Mersenne p, n = 1 and
// n > 1, all with full period <= 10^5.
std::vector<CharPoly> default_theorem_instances();

}  // namespace levelseq
