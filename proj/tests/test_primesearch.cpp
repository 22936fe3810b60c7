#include <vector>

#include <stdexcept>

#include "doctest.h"
#include "levelseq/primesearch.hpp"

using namespace levelseq;

TEST_CASE("primality spot values") {
    CHECK(is_prime_u64(7));
    CHECK(is_prime_u64(2147483647ull));         // 2^31 - 1
    CHECK(is_prime_u64(4294967291ull));         // 2^32 - 5
    CHECK(is_prime_u64(0 - std::uint64_t(257)));  // 2^64 - 257
    CHECK_FALSE(is_prime_u64(0));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(4294967287ull));  // 2^32 - 9
    CHECK_FALSE(is_prime_u64(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("primality agrees with a sieve below 10^6") {
    constexpr std::size_t kBound = 1'000'000;
    std::vector<char> composite(kBound, 0);
    for (std::size_t d = 2; d * d < kBound; ++d) {
        if (composite[d]) continue;
        for (std::size_t m = d * d; m < kBound; m += d) composite[m] = 1;
    }
    std::size_t bad = 0;
    for (std::size_t m = 0; m < kBound; ++m) {
        bool sieve_prime = m >= 2 && !composite[m];
        if (is_prime_u64(m) != sieve_prime) ++bad;
    }
    CHECK(bad == 0);
}

TEST_CASE("pseudo-mersenne offset lists") {
    CHECK(search_pseudo_mersenne(32) == std::vector<unsigned>{2, 4, 6, 23, 24, 25, 29});
    CHECK(search_pseudo_mersenne(64) == std::vector<unsigned>{8, 10, 29});
    CHECK(search_pseudo_mersenne(7).empty());

    CHECK(compose_pseudo_mersenne(32, 2) == 4294967291ull);
    CHECK(compose_pseudo_mersenne(64, 8) == 0 - std::uint64_t(257));
    CHECK_FALSE(is_prime_u64(compose_pseudo_mersenne(32, 3)));  // 2^32 - 9

    CHECK_THROWS_AS(search_pseudo_mersenne(2), std::invalid_argument);
    CHECK_THROWS_AS(search_pseudo_mersenne(65), std::invalid_argument);

    SUBCASE("scan range is exactly 1 <= i <= n - 2") {
        for (unsigned n : {8u, 16u, 32u, 64u}) {
            for (unsigned i : search_pseudo_mersenne(n)) {
                CHECK(i >= 1);
                CHECK(i <= n - 2);
                CHECK((std::uint64_t(1) << i) + 1 < (std::uint64_t(1) << (n - 1)));
            }
        }
    }
}
