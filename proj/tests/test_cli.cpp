#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "levelseq/levels.hpp"
#include "levelseq/primesearch.hpp"

using namespace levelseq;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
};

// Runs the installed binary through the shell; stderr is dropped.
CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("LEVELSEQ_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "LEVELSEQ_CLI must point at the CLI binary");
    std::string cmd = std::string("\"") + bin + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    int rc = pclose(pipe);
    res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return res;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

}  // namespace

TEST_CASE("gen emits residues as decimal lines") {
    CliResult r = run_cli("gen 5:1:2 --init 1 --len 4");
    CHECK(r.status == 0);
    CHECK(r.out == "1\n2\n4\n3\n");
}

TEST_CASE("gen emits level bit streams") {
    CliResult r = run_cli("gen 5:1:2 --init 1 --len 4 --level 1 --format ascii");
    CHECK(r.status == 0);
    CHECK(r.out == "0101\n");

    r = run_cli("gen 5:1:2 --init 1 --len 4 --level 1 --format packed");
    CHECK(r.status == 0);
    REQUIRE(r.out.size() == 1);
    CHECK(static_cast<unsigned char>(r.out[0]) == 0x0a);

    r = run_cli("gen 5:1:2 --init 1 --len 4 --level 1");  // packed is the default
    CHECK(r.status == 0);
    REQUIRE(r.out.size() == 1);
    CHECK(static_cast<unsigned char>(r.out[0]) == 0x0a);
}

TEST_CASE("gen emits little-endian words") {
    CliResult r = run_cli("gen 5:1:2 --init 1 --len 4 --format words");
    CHECK(r.status == 0);
    REQUIRE(r.out.size() == 32);
    const u64 expect[] = {1, 2, 4, 3};
    for (int t = 0; t < 4; ++t) {
        u64 v = 0;
        for (int b = 0; b < 8; ++b)
            v |= static_cast<u64>(static_cast<unsigned char>(r.out[8 * t + b])) << (8 * b);
        CHECK(v == expect[t]);
    }
}

TEST_CASE("gen rejects bad input") {
    CHECK(run_cli("gen 5:1:2 --init 0 --len 4").status == 2);      // all-zero state
    CHECK(run_cli("gen 5:1 --len 4").status == 2);                 // malformed spec
    CHECK(run_cli("gen 5:1:1 --len 4 --require-primitive").status == 2);
    CHECK(run_cli("gen 5:1:2 --len 4 --level 3").status == 2);     // level > k
    CHECK(run_cli("gen 5:1:2 --len 4 --format ascii").status == 2);
    CHECK(run_cli("gen 5:1:2 --len 4 --level 1 --format words").status == 2);
}

TEST_CASE("gen impulse default start") {
    CliResult r = run_cli("gen 3:2:1,1 --len 8");
    CHECK(r.status == 0);
    CHECK(r.out == "0\n1\n1\n2\n0\n2\n2\n1\n");
}

TEST_CASE("verify subcommand reports") {
    CliResult r = run_cli("verify lemma1 --p 11");
    CHECK(r.status == 0);
    nlohmann::json j = nlohmann::json::parse(lines_of(r.out).at(0));
    CHECK(j["check"] == "lemma1");
    CHECK(j["verdict"] == "pass");
    CHECK(j["params"]["holds_at"] == nlohmann::json::array({2}));

    r = run_cli("verify theorem --poly 5:1:2");
    CHECK(r.status == 0);
    j = nlohmann::json::parse(lines_of(r.out).at(0));
    CHECK(j["params"]["shift_sets"]["1"] == nlohmann::json::array({0, 2}));

    r = run_cli("verify star --p 7");
    CHECK(r.status == 0);

    r = run_cli("verify crossings --p 13 --lambda 5 --level 1");
    CHECK(r.status == 0);
    j = nlohmann::json::parse(lines_of(r.out).at(0));
    CHECK(j["params"]["count_low"] == 2);
    CHECK(j["params"]["identity_holds"] == false);

    CHECK(run_cli("verify bogus").status == 2);
}

TEST_CASE("verify sweeps pass at reduced bounds") {
    CHECK(run_cli("verify lemma1 --pmax 100").status == 0);
    CHECK(run_cli("verify lemma2 --pmax 60").status == 0);
    CHECK(run_cli("verify crossings --pmax 60").status == 0);
    CHECK(run_cli("verify periods --poly 11:1:2").status == 0);
}

TEST_CASE("primes lists the qualifying offsets") {
    CliResult r = run_cli("primes 32");
    CHECK(r.status == 0);
    std::vector<unsigned> is;
    for (const std::string& line : lines_of(r.out)) {
        unsigned i;
        unsigned long long p;
        REQUIRE(std::sscanf(line.c_str(), "%u %llu", &i, &p) == 2);
        CHECK(p == compose_pseudo_mersenne(32, i));
        CHECK(is_prime_u64(p));
        is.push_back(i);
    }
    CHECK(is == std::vector<unsigned>{2, 4, 6, 23, 24, 25, 29});

    r = run_cli("primes 64");
    is.clear();
    for (const std::string& line : lines_of(r.out)) {
        unsigned i;
        unsigned long long p;
        REQUIRE(std::sscanf(line.c_str(), "%u %llu", &i, &p) == 2);
        is.push_back(i);
    }
    CHECK(is == std::vector<unsigned>{8, 10, 29});

    r = run_cli("primes 7");
    CHECK(r.status == 0);
    CHECK(r.out.empty());

    CHECK(run_cli("primes 65").status == 2);
}

TEST_CASE("bench checks equality and reports throughput") {
    CliResult r = run_cli("bench 2^31-1 --ops 20000");
    CHECK(r.status == 0);
    CHECK(r.out.find("equality check: ok (20000 operand pairs)") != std::string::npos);
    CHECK(r.out.find("mersenne") != std::string::npos);
    CHECK(r.out.find("mul") != std::string::npos);

    r = run_cli("bench 2^32-5 --ops 20000");
    CHECK(r.status == 0);
    CHECK(r.out.find("equality check: ok") != std::string::npos);

    CHECK(run_cli("bench 2^32-6 --ops 1000").status == 2);  // even, not prime
    CHECK(run_cli("bench 15 --ops 1000").status == 2);
}

TEST_CASE("level streams recompose to the residue stream") {
    CliResult residues = run_cli("gen 13:1:2 --init 1 --len 100");
    REQUIRE(residues.status == 0);
    std::vector<std::string> res_lines = lines_of(residues.out);
    REQUIRE(res_lines.size() == 100);

    std::vector<u64> recomposed(100, 0);
    for (unsigned i = 0; i <= 3; ++i) {
        CliResult bits = run_cli("gen 13:1:2 --init 1 --len 100 --level " + std::to_string(i) +
                                 " --format ascii");
        REQUIRE(bits.status == 0);
        std::string flat;
        for (const std::string& line : lines_of(bits.out)) flat += line;
        REQUIRE(flat.size() == 100);
        for (std::size_t t = 0; t < 100; ++t)
            recomposed[t] |= static_cast<u64>(flat[t] - '0') << i;
    }
    for (std::size_t t = 0; t < 100; ++t) {
        CHECK(recomposed[t] == std::stoull(res_lines[t]));
    }

    SUBCASE("packed stream unpacks to the same bits") {
        CliResult packed = run_cli("gen 13:1:2 --init 1 --len 100 --level 2 --format packed");
        REQUIRE(packed.status == 0);
        std::vector<std::uint8_t> bytes(packed.out.begin(), packed.out.end());
        CliResult ascii = run_cli("gen 13:1:2 --init 1 --len 100 --level 2 --format ascii");
        std::string flat;
        for (const std::string& line : lines_of(ascii.out)) flat += line;
        std::vector<std::uint8_t> unpacked = unpack_bits(bytes, 100);
        REQUIRE(flat.size() == 100);
        for (std::size_t t = 0; t < 100; ++t) CHECK(unpacked[t] == flat[t] - '0');
    }
}

namespace {

// Report content with the wall-clock field removed.
nlohmann::json strip_timing(const std::string& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const std::string& line : lines_of(out)) {
        nlohmann::json j = nlohmann::json::parse(line);
        j.erase("elapsed_ms");
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace

TEST_CASE("seeded runs are deterministic and honor the environment seed") {
    CliResult a = run_cli("verify star --p 2147483647 --samples 2000");
    CliResult b = run_cli("verify star --p 2147483647 --samples 2000");
    CHECK(a.status == 0);
    CHECK(strip_timing(a.out) == strip_timing(b.out));

    nlohmann::json j = nlohmann::json::parse(lines_of(a.out).at(0));
    CHECK(j["params"]["seed"] == 0);  // default seed

    CliResult c = run_cli("verify star --p 2147483647 --samples 2000 --seed 9");
    j = nlohmann::json::parse(lines_of(c.out).at(0));
    CHECK(j["params"]["seed"] == 9);

    const char* bin = std::getenv("LEVELSEQ_CLI");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string("LEVELSEQ_SEED=9 \"") + bin +
                      "\" verify star --p 2147483647 --samples 2000 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    pclose(pipe);
    CHECK(strip_timing(out) == strip_timing(c.out));
}
