#include "levelseq/fieldcore.hpp"

#include <bit>
#include <stdexcept>

#include "levelseq/primesearch.hpp"

namespace levelseq {

PrimeDesc PrimeDesc::from_prime(u64 p) {
    if (p < 3 || (p & 1) == 0) throw std::invalid_argument("modulus must be an odd prime >= 3");
    if (!is_prime_u64(p)) throw std::invalid_argument("modulus is not prime");
    PrimeDesc pd;
    pd.p = p;
    pd.k = static_cast<unsigned>(std::bit_width(p)) - 1;
    pd.digits.resize(pd.k + 1);
    for (unsigned i = 0; i <= pd.k; ++i) pd.digits[i] = static_cast<std::uint8_t>((p >> i) & 1);
    for (unsigned i = 0; i <= pd.k; ++i) {
        if (pd.digits[i] == 0) {
            pd.i0 = i;
            break;
        }
    }
    return pd;
}

PseudoMersenneDesc PseudoMersenneDesc::make(unsigned n, u64 a) {
    if (n < 2 || n > 64) throw std::invalid_argument("bit width must be in [2, 64]");
    if (a == 0 || a >= (u64(1) << (n - 1)))
        throw std::invalid_argument("offset must satisfy 0 < a < 2^(n-1)");
    PseudoMersenneDesc pm;
    pm.n = n;
    pm.a = a;
    pm.prime = is_prime_u64(pm.modulus());
    return pm;
}

PseudoMersenneDesc PseudoMersenneDesc::from_prime(const PrimeDesc& pd) {
    PseudoMersenneDesc pm;
    pm.n = pd.k + 1;
    pm.a = (pm.n == 64 ? 0 - pd.p : (u64(1) << pm.n) - pd.p);  // a < 2^k since p > 2^k
    pm.prime = true;
    return pm;
}

FieldOps::FieldOps(const PrimeDesc& pd)
    : pd_(pd),
      pm_(PseudoMersenneDesc::from_prime(pd)),
      folds_((pm_.a >> (pm_.n / 2)) == 0) {}

}  // namespace levelseq
