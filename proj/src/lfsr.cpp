#include "levelseq/lfsr.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <stdexcept>

#include "levelseq/primesearch.hpp"

namespace levelseq {

namespace {

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pollard_rho(u64 n) {
    // n odd composite with no factor below the trial bound.
    for (u64 c = 1;; ++c) {
        auto step = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        u64 x = 2, y = 2, d = 1;
        while (d == 1) {
            x = step(x);
            y = step(step(y));
            d = std::gcd(x > y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

constexpr u64 kTrialBound = 1'000'000;

void factor_into(u64 m, std::vector<u64>& out) {
    if (m == 1) return;
    if (is_prime_u64(m)) {
        out.push_back(m);
        return;
    }
    u64 d = pollard_rho(m);
    factor_into(d, out);
    factor_into(m / d, out);
}

// Elements of F_p[x]/(f) as coefficient vectors of length n.
using PolyElem = std::vector<u64>;

PolyElem poly_mul_mod(const CharPoly& f, const PolyElem& lhs, const PolyElem& rhs) {
    const PrimeDesc& pd = f.pd;
    const unsigned n = f.degree;
    std::vector<u64> prod(2 * n - 1, 0);
    for (unsigned i = 0; i < n; ++i) {
        if (lhs[i] == 0) continue;
        for (unsigned j = 0; j < n; ++j) {
            if (rhs[j] == 0) continue;
            prod[i + j] = fe_add(pd, prod[i + j], fe_mul(pd, lhs[i], rhs[j]));
        }
    }
    // Reduce x^d = x^(d-n) * (c_{n-1} x^(n-1) + ... + c_0) from the top down.
    for (unsigned d = 2 * n - 2; d >= n && d < 2 * n; --d) {
        u64 v = prod[d];
        if (v == 0) continue;
        prod[d] = 0;
        for (unsigned j = 0; j < n; ++j) {
            prod[d - n + j] = fe_add(pd, prod[d - n + j], fe_mul(pd, v, f.coeffs[j]));
        }
    }
    prod.resize(n);
    return prod;
}

PolyElem poly_pow_x(const CharPoly& f, u64 e) {
    const unsigned n = f.degree;
    PolyElem base(n, 0);
    if (n == 1) {
        base[0] = f.coeffs[0];  // x reduces to c_0
    } else {
        base[1] = 1;
    }
    PolyElem acc(n, 0);
    acc[0] = 1;
    while (e) {
        if (e & 1) acc = poly_mul_mod(f, acc, base);
        base = poly_mul_mod(f, base, base);
        e >>= 1;
    }
    return acc;
}

bool poly_is_one(const PolyElem& v) {
    if (v[0] != 1) return false;
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] != 0) return false;
    }
    return true;
}

void check_state(const CharPoly& f, std::span<const u64> init) {
    if (init.size() != f.degree) throw std::invalid_argument("initial state must have n entries");
    bool nonzero = false;
    for (u64 v : init) {
        if (v >= f.pd.p) throw std::invalid_argument("initial state entries must be residues in [0, p)");
        nonzero |= (v != 0);
    }
    if (!nonzero) throw std::invalid_argument("initial state must not be all-zero");
}

template <class T>
u64 period_of(std::span<const T> buf, u64 full_period) {
    if (buf.empty()) throw std::invalid_argument("empty sequence buffer");
    if (buf.size() != full_period)
        throw std::invalid_argument("buffer must hold exactly one full period");
    if (full_period == 1) return 1;
    std::map<u64, unsigned> powers;
    for (u64 q : factor_u64(full_period)) ++powers[q];
    std::vector<u64> divisors{1};
    for (auto [q, e] : powers) {
        std::size_t count = divisors.size();
        u64 qe = 1;
        for (unsigned t = 1; t <= e; ++t) {
            qe *= q;
            for (std::size_t idx = 0; idx < count; ++idx) divisors.push_back(divisors[idx] * qe);
        }
    }
    std::sort(divisors.begin(), divisors.end());
    for (u64 d : divisors) {
        bool fixed = true;
        for (u64 t = 0; t < full_period; ++t) {
            u64 u = t + d;
            if (u >= full_period) u -= full_period;
            if (buf[t] != buf[u]) {
                fixed = false;
                break;
            }
        }
        if (fixed) return d;
    }
    return full_period;  // d = full_period always matches
}

}  // namespace

u64 CharPoly::order_size() const {
    u128 q = 1;
    for (unsigned i = 0; i < degree; ++i) {
        q *= pd.p;
        if (q - 1 >= (static_cast<u128>(1) << 63))
            throw std::overflow_error("p^n - 1 >= 2^63 is unsupported");
    }
    return static_cast<u64>(q - 1);
}

std::string CharPoly::spec() const {
    std::string out = std::to_string(pd.p) + ":" + std::to_string(degree) + ":";
    for (unsigned i = 0; i < degree; ++i) {
        if (i) out += ',';
        out += std::to_string(coeffs[i]);
    }
    return out;
}

CharPoly CharPoly::make(u64 p, std::vector<u64> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("polynomial degree must be >= 1");
    CharPoly f;
    f.pd = PrimeDesc::from_prime(p);
    f.degree = static_cast<unsigned>(coeffs.size());
    for (u64 c : coeffs) {
        if (c >= p) throw std::invalid_argument("coefficients must be residues in [0, p)");
    }
    f.coeffs = std::move(coeffs);
    return f;
}

CharPoly CharPoly::parse(const std::string& text) {
    auto parse_u64 = [](std::string_view s) {
        u64 v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw std::invalid_argument("polynomial spec: bad number '" + std::string(s) + "'");
        return v;
    };
    std::string_view sv(text);
    auto c1 = sv.find(':');
    auto c2 = (c1 == std::string_view::npos) ? c1 : sv.find(':', c1 + 1);
    if (c2 == std::string_view::npos)
        throw std::invalid_argument("polynomial spec must be p:n:c0,c1,...");
    u64 p = parse_u64(sv.substr(0, c1));
    u64 n = parse_u64(sv.substr(c1 + 1, c2 - c1 - 1));
    if (n == 0 || n > 64) throw std::invalid_argument("polynomial spec: degree out of range");
    std::vector<u64> coeffs;
    std::string_view rest = sv.substr(c2 + 1);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        coeffs.push_back(parse_u64(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    if (coeffs.size() != n)
        throw std::invalid_argument("polynomial spec: expected n coefficients");
    return make(p, std::move(coeffs));
}

std::vector<u64> factor_u64(u64 m) {
    if (m < 2 || m >= (u64(1) << 63))
        throw std::invalid_argument("factor_u64 requires 2 <= m < 2^63");
    std::vector<u64> out;
    for (u64 d : {2ull, 3ull}) {
        while (m % d == 0) {
            out.push_back(d);
            m /= d;
        }
    }
    for (u64 d = 5; d <= kTrialBound && d * d <= m; d += 6) {
        for (u64 q : {d, d + 2}) {
            while (m % q == 0) {
                out.push_back(q);
                m /= q;
            }
        }
    }
    factor_into(m, out);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_primitive(const CharPoly& f) {
    u64 order = f.order_size();
    if (f.coeffs[0] == 0) return false;  // x is a zero divisor mod f
    if (!poly_is_one(poly_pow_x(f, order))) return false;
    std::vector<u64> primes = factor_u64(order);
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (u64 q : primes) {
        if (poly_is_one(poly_pow_x(f, order / q))) return false;
    }
    return true;
}

std::vector<u64> impulse_state(unsigned n) {
    if (n == 0) throw std::invalid_argument("degree must be >= 1");
    std::vector<u64> st(n, 0);
    st[n - 1] = 1;
    return st;
}

std::vector<u64> lrs_generate(const CharPoly& f, std::span<const u64> init, u64 count) {
    check_state(f, init);
    if (count == 0) throw std::invalid_argument("length must be >= 1");
    const unsigned n = f.degree;
    FieldOps ops(f.pd);
    std::vector<u64> out;
    out.reserve(static_cast<std::size_t>(count));
    for (unsigned i = 0; i < n && out.size() < count; ++i) out.push_back(init[i]);
    for (u64 t = out.size(); t < count; ++t) {
        u64 acc = 0;
        for (unsigned j = 0; j < n; ++j) {
            acc = ops.add(acc, ops.mul(f.coeffs[j], out[t - n + j]));
        }
        out.push_back(acc);
    }
    return out;
}

MSeq mseq_generate(const CharPoly& f, std::span<const u64> init, u64 count) {
    if (!is_primitive(f))
        throw std::invalid_argument("polynomial is not primitive over F_p");
    MSeq s;
    s.poly = f;
    s.period = f.order_size();
    s.terms = lrs_generate(f, init, count);
    return s;
}

MSeq mseq_shift(const MSeq& s, u64 tau) {
    if (s.period == 0 || s.terms.size() < s.period)
        throw std::invalid_argument("shift requires at least one full period of terms");
    if (tau > s.period) throw std::out_of_range("shift offset must satisfy 0 <= tau <= period");
    if (tau == s.period) tau = 0;
    MSeq out;
    out.poly = s.poly;
    out.period = s.period;
    out.terms.resize(s.terms.size());
    for (std::size_t t = 0; t < s.terms.size(); ++t) {
        out.terms[t] = s.terms[(t + tau) % s.period];
    }
    return out;
}

MSeq seq_scale(const MSeq& s, u64 lambda) {
    if (lambda == 0 || lambda >= s.poly.pd.p)
        throw std::invalid_argument("scale factor must be a non-zero residue");
    MSeq out;
    out.poly = s.poly;
    out.period = s.period;
    out.terms.resize(s.terms.size());
    for (std::size_t t = 0; t < s.terms.size(); ++t) {
        out.terms[t] = fe_mul(s.poly.pd, lambda, s.terms[t]);
    }
    return out;
}

u64 seq_period(std::span<const u64> terms, u64 full_period) {
    return period_of(terms, full_period);
}

u64 seq_period(std::span<const std::uint8_t> bits, u64 full_period) {
    return period_of(bits, full_period);
}

LrsStream::LrsStream(const CharPoly& f, std::span<const u64> init)
    : poly_(f), ops_(f.pd), state_(init.begin(), init.end()) {
    check_state(f, init);
}

u64 LrsStream::next() {
    const unsigned n = poly_.degree;
    u64 out = state_[head_];
    u64 acc = 0;
    for (unsigned j = 0; j < n; ++j) {
        acc = ops_.add(acc, ops_.mul(poly_.coeffs[j], state_[(head_ + j) % n]));
    }
    state_[head_] = acc;
    head_ = (head_ + 1) % n;
    return out;
}

}  // namespace levelseq
