#include "levelseq/levels.hpp"

#include <cassert>
#include <stdexcept>

namespace levelseq {

int bit_level(const PrimeDesc& pd, u64 a, unsigned i) {
    if (i > pd.k) throw std::out_of_range("level index must satisfy 0 <= i <= k");
    assert(a < pd.p);
    return static_cast<int>((a >> i) & 1);
}

std::optional<unsigned> compute_i0(const PrimeDesc& pd) {
    for (unsigned i = 0; i < pd.digits.size(); ++i) {
        if (pd.digits[i] == 0) return i;
    }
    return std::nullopt;
}

LevelSeq extract_level(const MSeq& s, unsigned i) {
    const PrimeDesc& pd = s.poly.pd;
    if (i > pd.k) throw std::out_of_range("level index must satisfy 0 <= i <= k");
    LevelSeq ls;
    ls.level = i;
    ls.p = pd.p;
    ls.source = s.poly.spec();
    ls.bits.resize(s.terms.size());
    for (std::size_t t = 0; t < s.terms.size(); ++t) {
        ls.bits[t] = static_cast<std::uint8_t>((s.terms[t] >> i) & 1);
    }
    return ls;
}

std::vector<LevelSeq> expand_levels(const MSeq& s) {
    std::vector<LevelSeq> out;
    out.reserve(s.poly.pd.k + 1);
    for (unsigned i = 0; i <= s.poly.pd.k; ++i) out.push_back(extract_level(s, i));
    return out;
}

std::vector<u64> recompose_levels(std::span<const LevelSeq> levels) {
    if (levels.empty()) return {};
    std::size_t len = levels[0].bits.size();
    std::vector<u64> terms(len, 0);
    for (const LevelSeq& ls : levels) {
        if (ls.bits.size() != len)
            throw std::invalid_argument("level buffers must have equal length");
        for (std::size_t t = 0; t < len; ++t) {
            terms[t] |= static_cast<u64>(ls.bits[t] & 1) << ls.level;
        }
    }
    return terms;
}

std::vector<std::uint8_t> pack_bits(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t t = 0; t < bits.size(); ++t) {
        bytes[t >> 3] |= static_cast<std::uint8_t>((bits[t] & 1) << (t & 7));
    }
    return bytes;
}

std::vector<std::uint8_t> unpack_bits(std::span<const std::uint8_t> bytes, std::size_t bit_count) {
    if (bit_count > bytes.size() * 8)
        throw std::invalid_argument("bit count exceeds packed buffer size");
    std::vector<std::uint8_t> bits(bit_count);
    for (std::size_t t = 0; t < bit_count; ++t) {
        bits[t] = (bytes[t >> 3] >> (t & 7)) & 1;
    }
    return bits;
}

std::string ascii_bits(std::span<const std::uint8_t> bits) {
    std::string out;
    out.reserve(bits.size() + bits.size() / 64 + 1);
    for (std::size_t t = 0; t < bits.size(); ++t) {
        out.push_back(static_cast<char>('0' + (bits[t] & 1)));
        if ((t + 1) % 64 == 0) out.push_back('\n');
    }
    if (!bits.empty() && bits.size() % 64 != 0) out.push_back('\n');
    return out;
}

}  // namespace levelseq
