#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "levelseq/fieldcore.hpp"
#include "levelseq/levels.hpp"
#include "levelseq/lfsr.hpp"
#include "levelseq/primesearch.hpp"
#include "levelseq/rng.hpp"
#include "levelseq/verify.hpp"

namespace {

using namespace levelseq;

std::vector<u64> parse_init(const std::string& text, const CharPoly& f) {
    if (text == "impulse") return impulse_state(f.degree);
    std::vector<u64> init;
    std::string_view rest(text);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string_view tok = rest.substr(0, comma);
        u64 v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size())
            throw std::invalid_argument("bad initial state entry '" + std::string(tok) + "'");
        init.push_back(v);
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return init;
}

// Accepts "2^31-1" style widths or a plain decimal value.
u64 parse_modulus(const std::string& text) {
    if (text.rfind("2^", 0) == 0) {
        auto dash = text.find('-', 2);
        if (dash == std::string::npos)
            throw std::invalid_argument("modulus must look like 2^n-a or be decimal");
        unsigned n = static_cast<unsigned>(std::stoul(text.substr(2, dash - 2)));
        u64 a = std::stoull(text.substr(dash + 1));
        if (n < 2 || n > 64) throw std::invalid_argument("modulus width out of range");
        if (a == 0 || a >= (u64(1) << (n - 1)))
            throw std::invalid_argument("modulus offset must satisfy 0 < a < 2^(n-1)");
        return n == 64 ? 0 - a : (u64(1) << n) - a;
    }
    return std::stoull(text);
}

std::vector<u64> odd_primes_below(u64 bound) {
    std::vector<u64> out;
    for (u64 p = 3; p < bound; p += 2) {
        if (is_prime_u64(p)) out.push_back(p);
    }
    return out;
}

struct GenOptions {
    std::string poly;
    std::string init = "impulse";
    u64 len = 0;
    int level = -1;
    std::string format;
    std::string out = "-";
    bool require_primitive = false;
};

int cmd_gen(const GenOptions& opt) {
    CharPoly f = CharPoly::parse(opt.poly);
    std::vector<u64> init = parse_init(opt.init, f);
    if (opt.require_primitive && !is_primitive(f)) {
        std::cerr << "error: polynomial is not primitive over F_p\n";
        return 2;
    }
    const bool level_mode = opt.level >= 0;
    if (level_mode && static_cast<unsigned>(opt.level) > f.pd.k) {
        std::cerr << "error: level index exceeds k = " << f.pd.k << "\n";
        return 2;
    }
    std::string fmt = opt.format;
    if (fmt.empty()) fmt = level_mode ? "packed" : "decimal";
    if (level_mode && fmt != "packed" && fmt != "ascii") {
        std::cerr << "error: level output supports --format packed|ascii\n";
        return 2;
    }
    if (!level_mode && fmt != "decimal" && fmt != "words") {
        std::cerr << "error: residue output supports --format decimal|words\n";
        return 2;
    }

    std::ofstream file;
    if (opt.out != "-") {
        file.open(opt.out, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot open output file " << opt.out << "\n";
            return 2;
        }
    }
    std::ostream& os = (opt.out == "-") ? std::cout : file;

    LrsStream stream(f, init);
    if (fmt == "decimal") {
        for (u64 t = 0; t < opt.len; ++t) os << stream.next() << '\n';
    } else if (fmt == "words") {
        for (u64 t = 0; t < opt.len; ++t) {
            u64 v = stream.next();
            char word[8];
            for (int b = 0; b < 8; ++b) word[b] = static_cast<char>(v >> (8 * b));
            os.write(word, 8);
        }
    } else if (fmt == "ascii") {
        const auto i = static_cast<unsigned>(opt.level);
        for (u64 t = 0; t < opt.len; ++t) {
            os.put(static_cast<char>('0' + bit_level(f.pd, stream.next(), i)));
            if ((t + 1) % 64 == 0) os.put('\n');
        }
        if (opt.len % 64 != 0) os.put('\n');
    } else {  // packed
        const auto i = static_cast<unsigned>(opt.level);
        std::uint8_t byte = 0;
        for (u64 t = 0; t < opt.len; ++t) {
            byte |= static_cast<std::uint8_t>(bit_level(f.pd, stream.next(), i) << (t & 7));
            if ((t & 7) == 7) {
                os.put(static_cast<char>(byte));
                byte = 0;
            }
        }
        if (opt.len % 8 != 0) os.put(static_cast<char>(byte));
    }
    os.flush();
    return os ? 0 : 2;
}

struct VerifyOptions {
    std::string suite;
    u64 p = 0;
    u64 pmax = 0;
    std::string poly;
    u64 lambda = 0;
    int level = -1;
    u64 bound = 100000;
    u64 samples = 1'000'000;
    u64 seed = 0;
};

constexpr u64 kStarSampledPrime = 2147483647;  // 2^31 - 1

int cmd_verify(const VerifyOptions& opt) {
    std::vector<VerificationReport> reports;

    auto prime_list = [&](u64 default_pmax, u64 min_p) {
        std::vector<u64> ps;
        if (opt.p != 0) {
            ps.push_back(opt.p);
        } else {
            for (u64 q : odd_primes_below(opt.pmax ? opt.pmax : default_pmax))
                if (q >= min_p) ps.push_back(q);
        }
        return ps;
    };
    auto instances = [&]() {
        std::vector<CharPoly> fs;
        if (!opt.poly.empty()) {
            fs.push_back(CharPoly::parse(opt.poly));
        } else {
            fs = default_theorem_instances();
        }
        return fs;
    };

    auto run_lemma1 = [&] {
        for (u64 q : prime_list(1000, 3)) reports.push_back(verify_lemma1(PrimeDesc::from_prime(q)));
    };
    auto run_lemma2 = [&] {
        for (u64 q : prime_list(200, 5)) reports.push_back(verify_lemma2(PrimeDesc::from_prime(q)));
    };
    auto run_crossings = [&] {
        if (opt.p != 0 && opt.lambda != 0) {
            // Single-instance dump: one (lambda, i) bookkeeping record.
            PrimeDesc pd = PrimeDesc::from_prime(opt.p);
            unsigned i = opt.level >= 0 ? static_cast<unsigned>(opt.level) : 0;
            CrossingCounts cc = count_level_crossings(pd, opt.lambda, i);
            VerificationReport rep;
            rep.check = "crossings_instance";
            rep.p = pd.p;
            rep.params = cc;
            bool expect_identity = (opt.lambda == 1) || (opt.lambda == pd.p - 1);
            rep.verdict = cc.z_ge_x &&
                          (!(cc.precond_lambda && cc.precond_shift) ||
                           (cc.closed_match && cc.identity_holds == expect_identity));
            reports.push_back(std::move(rep));
            return;
        }
        for (u64 q : prime_list(200, 3)) reports.push_back(verify_crossings(PrimeDesc::from_prime(q)));
    };
    auto run_theorem = [&] {
        for (const CharPoly& f : instances()) reports.push_back(verify_theorem(f, opt.bound));
    };
    auto run_periods = [&] {
        for (const CharPoly& f : instances())
            reports.push_back(verify_period_corollary(f, opt.bound));
    };
    auto run_star = [&] {
        std::vector<u64> ps = opt.p != 0 ? std::vector<u64>{opt.p}
                                         : std::vector<u64>{7, 31, 127, 8191, kStarSampledPrime};
        for (u64 q : ps)
            reports.push_back(
                verify_star_identity(PrimeDesc::from_prime(q), opt.samples, opt.seed));
    };

    if (opt.suite == "lemma1") run_lemma1();
    else if (opt.suite == "lemma2") run_lemma2();
    else if (opt.suite == "crossings") run_crossings();
    else if (opt.suite == "theorem") run_theorem();
    else if (opt.suite == "periods") run_periods();
    else if (opt.suite == "star") run_star();
    else if (opt.suite == "all") {
        run_lemma1();
        run_lemma2();
        run_crossings();
        run_theorem();
        run_periods();
        run_star();
    } else {
        std::cerr << "error: unknown suite '" << opt.suite
                  << "' (expected lemma1|lemma2|crossings|theorem|periods|star|all)\n";
        return 2;
    }

    bool all_pass = true;
    for (const VerificationReport& rep : reports) {
        nlohmann::json j = rep;
        std::cout << j.dump() << "\n";
        all_pass &= rep.verdict;
    }
    std::cerr << (all_pass ? "PASS" : "FAIL") << " (" << reports.size() << " checks)\n";
    return all_pass ? 0 : 1;
}

int cmd_primes(unsigned n) {
    for (unsigned i : search_pseudo_mersenne(n)) {
        std::cout << i << ' ' << compose_pseudo_mersenne(n, i) << '\n';
    }
    return 0;
}

int cmd_bench(const std::string& modspec, double ops, u64 seed) {
    u64 p = parse_modulus(modspec);
    if (!is_prime_u64(p)) {
        std::cerr << "error: modulus " << modspec << " is not prime\n";
        return 2;
    }
    PrimeDesc pd = PrimeDesc::from_prime(p);
    PseudoMersenneDesc pm = PseudoMersenneDesc::from_prime(pd);
    const u64 count = std::max<u64>(1, static_cast<u64>(std::llround(ops)));
    const bool mersenne = pd.is_mersenne();

    std::mt19937_64 rng(seed);
    std::vector<u64> xs(count), ys(count);
    for (u64 t = 0; t < count; ++t) {
        xs[t] = uniform_below(rng, p);
        ys[t] = uniform_below(rng, p);
    }

    auto generic_add = [&](u64 x, u64 y) {
        return static_cast<u64>((static_cast<u128>(x) + y) % p);
    };
    auto fast_add = [&](u64 x, u64 y) {
        return mersenne ? mersenne_add(pd, x, y) : fe_add(pd, x, y);
    };
    auto generic_mul = [&](u64 x, u64 y) {
        return static_cast<u64>(static_cast<u128>(x) * y % p);
    };
    auto fast_mul = [&](u64 x, u64 y) {
        return reduce_pseudo_mersenne(pm, static_cast<u128>(x) * y);
    };

    for (u64 t = 0; t < count; ++t) {
        if (fast_add(xs[t], ys[t]) != generic_add(xs[t], ys[t]) ||
            fast_mul(xs[t], ys[t]) != generic_mul(xs[t], ys[t])) {
            std::cerr << "error: fast path disagrees with generic reduction at x=" << xs[t]
                      << " y=" << ys[t] << "\n";
            return 1;
        }
    }
    std::cout << "equality check: ok (" << count << " operand pairs)\n";

    u64 sink = 0;
    auto throughput = [&](auto&& fn) {
        auto pass = [&] {
            u64 acc = 0;
            for (u64 t = 0; t < count; ++t) acc ^= fn(xs[t], ys[t]);
            sink = sink * 0x9e3779b97f4a7c15ull + acc;
        };
        pass();  // warmup
        std::array<double, 5> runs{};
        for (double& r : runs) {
            auto t0 = std::chrono::steady_clock::now();
            pass();
            r = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        std::sort(runs.begin(), runs.end());
        return static_cast<double>(count) / runs[2];  // median of 5
    };

    std::cout << "modulus " << p << " = 2^" << pm.n << " - " << pm.a
              << (mersenne ? " (mersenne)\n" : "\n");
    std::printf("%-4s %-8s %14s\n", "op", "route", "ops/sec");
    std::printf("%-4s %-8s %14.3e\n", "add", "generic", throughput(generic_add));
    std::printf("%-4s %-8s %14.3e\n", "add", "fast", throughput(fast_add));
    std::printf("%-4s %-8s %14.3e\n", "mul", "generic", throughput(generic_mul));
    std::printf("%-4s %-8s %14.3e\n", "mul", "fast", throughput(fast_mul));
    std::printf("checksum %016llx\n", static_cast<unsigned long long>(sink));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"m-sequences over odd prime fields, binary level sequences, and brute-force checks"};
    app.require_subcommand(1);

    GenOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a residue or level-bit stream");
    gen_cmd->add_option("poly", gen.poly, "characteristic polynomial p:n:c0,c1,...")->required();
    gen_cmd->add_option("--init", gen.init, "initial state: comma list or 'impulse'");
    gen_cmd->add_option("--len", gen.len, "number of terms to emit")->required();
    gen_cmd->add_option("--level", gen.level, "emit the bit stream of this level instead");
    gen_cmd->add_option("--format", gen.format, "decimal|words (residues), packed|ascii (levels)");
    gen_cmd->add_option("--out", gen.out, "output path, '-' for stdout");
    gen_cmd->add_flag("--require-primitive", gen.require_primitive,
                      "reject non-primitive polynomials");

    VerifyOptions ver;
    CLI::App* ver_cmd = app.add_subcommand("verify", "run a brute-force verification suite");
    ver_cmd->add_option("suite", ver.suite, "lemma1|lemma2|crossings|theorem|periods|star|all")
        ->required();
    ver_cmd->add_option("--p", ver.p, "check a single odd prime");
    ver_cmd->add_option("--pmax", ver.pmax, "sweep all odd primes below this bound");
    ver_cmd->add_option("--poly", ver.poly, "polynomial instance for theorem/periods");
    ver_cmd->add_option("--lambda", ver.lambda, "scale factor for a single crossings instance");
    ver_cmd->add_option("--level", ver.level, "level index for a single crossings instance");
    ver_cmd->add_option("--bound", ver.bound, "largest full period accepted");
    ver_cmd->add_option("--samples", ver.samples, "sample budget for large Mersenne moduli");
    ver_cmd->add_option("--seed", ver.seed, "RNG seed")->envname("LEVELSEQ_SEED");

    unsigned primes_n = 0;
    CLI::App* primes_cmd =
        app.add_subcommand("primes", "list i with 2^n - (2^i + 1) prime, with the primes");
    primes_cmd->add_option("n", primes_n, "bit width in [8, 64]")->required();

    std::string bench_mod;
    double bench_ops = 1e6;
    u64 bench_seed = 0;
    CLI::App* bench_cmd =
        app.add_subcommand("bench", "compare generic vs fast reduction throughput");
    bench_cmd->add_option("modulus", bench_mod, "prime modulus, e.g. 2^31-1 or decimal")
        ->required();
    bench_cmd->add_option("--ops", bench_ops, "operand pairs per run (default 1e6)");
    bench_cmd->add_option("--seed", bench_seed, "RNG seed")->envname("LEVELSEQ_SEED");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen);
        if (ver_cmd->parsed()) return cmd_verify(ver);
        if (primes_cmd->parsed()) return cmd_primes(primes_n);
        if (bench_cmd->parsed()) return cmd_bench(bench_mod, bench_ops, bench_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
