#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levelseq/fieldcore.hpp"
#include "levelseq/lfsr.hpp"

namespace levelseq {

// The binary sequence of bit i across the terms of a residue sequence.
struct LevelSeq {
    unsigned level = 0;
    std::vector<std::uint8_t> bits;  // one byte per bit, values 0/1
    u64 p = 0;
    std::string source;  // generating polynomial spec
};

// Bit i of the binary expansion of a residue a in [0, p).
// Equivalently 0 iff (a mod 2^(i+1)) < 2^i.
int bit_level(const PrimeDesc& pd, u64 a, unsigned i);

// Smallest i with digit p_i = 0; empty when p = 2^(k+1) - 1.
std::optional<unsigned> compute_i0(const PrimeDesc& pd);

LevelSeq extract_level(const MSeq& s, unsigned i);

// All levels 0..k, in order.
std::vector<LevelSeq> expand_levels(const MSeq& s);

// Termwise sum of bits_i(t) * 2^i; inverse of expand_levels.
std::vector<u64> recompose_levels(std::span<const LevelSeq> levels);

// Packed form: bit t lands in byte t/8 at bit position t%8 (LSB-first);
// trailing bits of the last byte are zero.
std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> bytes, std::size_t bit_count);

// ASCII form: '0'/'1' characters with a newline after every 64 bits and a
// terminating newline.
std::string ascii_bits(std::span<const std::uint8_t> bits);

}  // namespace levelseq
