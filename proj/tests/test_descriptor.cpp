#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "mbow/descriptor.hpp"
#include "mbow/patch.hpp"
#include "mbow/test_pattern.hpp"
#include "support/oracles.hpp"

using mbow::BitVector;
using mbow::Patch;
using mbow::TestPattern;

namespace {

std::filesystem::path temp_file(const char* name) {
    return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("smoothing preserves constant patches") {
    Patch p(48, 48);
    for (auto& v : p.raw) v = 100;
    const Patch s = smooth(p);
    CHECK(s.scale == 25);
    for (const auto v : s.raw) CHECK(v == 100 * 25);
}

TEST_CASE("single bright pixel spreads to a 5x5 plateau of value/25") {
    Patch p(48, 48);
    p.at(20, 20) = 250;
    const Patch s = smooth(p);
    for (int v = 0; v < 48; ++v)
        for (int u = 0; u < 48; ++u) {
            const bool in_plateau = std::abs(u - 20) <= 2 && std::abs(v - 20) <= 2;
            // Value is raw/scale; the plateau holds 250/25 exactly.
            CHECK(s.at(u, v) == (in_plateau ? 250 : 0));
        }
}

TEST_CASE("smoothing matches the direct convolution oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Patch p = oracle::random_patch(48, rng);
        const Patch s = smooth(p);
        CHECK(s.raw == oracle::box5x5(p.raw, 48, 48));
        CHECK(s.scale == 25);
    }
}

TEST_CASE("smoothing twice equals the composed-kernel oracle exactly") {
    std::mt19937_64 rng(12);
    const Patch p = oracle::random_patch(48, rng);
    const Patch twice = smooth(smooth(p));
    // Independent path: apply the literal convolution twice; rational scale
    // is 25 * 25 on both sides, so raw values must match exactly.
    const auto once = oracle::box5x5(p.raw, 48, 48);
    CHECK(twice.raw == oracle::box5x5(once, 48, 48));
    CHECK(twice.scale == 625);
}

TEST_CASE("pattern generation is deterministic and valid") {
    const TestPattern a = mbow::generate_pattern(42, 512, 48, 48);
    const TestPattern b = mbow::generate_pattern(42, 512, 48, 48);
    CHECK(a == b);
    CHECK(a.bits() == 512);
    for (const auto& pair : a.pairs) {
        CHECK(pair.au < 48);
        CHECK(pair.av < 48);
        CHECK(pair.bu < 48);
        CHECK(pair.bv < 48);
        CHECK((pair.au != pair.bu || pair.av != pair.bv));
    }
    const TestPattern c = mbow::generate_pattern(43, 512, 48, 48);
    CHECK(a.pairs != c.pairs);
}

TEST_CASE("pattern save/load round trip and error paths") {
    const auto path = temp_file("mbow_pattern_roundtrip.txt");
    const TestPattern a = mbow::generate_pattern(7, 64, 48, 48);
    mbow::save_pattern(a, path);
    const TestPattern b = mbow::load_pattern(path);
    CHECK(a.pairs == b.pairs);
    CHECK(a.patch_width == b.patch_width);

    SUBCASE("out-of-bounds coordinate names its line") {
        const auto bad = temp_file("mbow_pattern_oob.txt");
        std::ofstream out(bad);
        out << "2 48 48\n0 0 1 1\n48 0 1 1\n";
        out.close();
        CHECK_THROWS_WITH_AS(mbow::load_pattern(bad), doctest::Contains(":3:"),
                             std::runtime_error);
    }
    SUBCASE("wrong line count is rejected") {
        const auto bad = temp_file("mbow_pattern_count.txt");
        std::ofstream out(bad);
        out << "3 48 48\n0 0 1 1\n2 2 3 3\n";
        out.close();
        CHECK_THROWS_AS(mbow::load_pattern(bad), std::runtime_error);
    }
    SUBCASE("malformed line names its line") {
        const auto bad = temp_file("mbow_pattern_malformed.txt");
        std::ofstream out(bad);
        out << "1 48 48\n0 0 one 1\n";
        out.close();
        CHECK_THROWS_WITH_AS(mbow::load_pattern(bad), doctest::Contains(":2:"),
                             std::runtime_error);
    }
    SUBCASE("degenerate pair is rejected") {
        const auto bad = temp_file("mbow_pattern_degenerate.txt");
        std::ofstream out(bad);
        out << "1 48 48\n5 5 5 5\n";
        out.close();
        CHECK_THROWS_AS(mbow::load_pattern(bad), std::runtime_error);
    }
}

TEST_CASE("binary tests: constant patch gives all zeros (ties are 0)") {
    const TestPattern pattern = mbow::generate_pattern(1, 256, 48, 48);
    Patch p(48, 48);
    for (auto& v : p.raw) v = 77;
    CHECK(mbow::binary_tests(p, pattern).cardinality() == 0);
}

TEST_CASE("binary tests: monotone ramp sets the expected bit") {
    TestPattern pattern;
    pattern.pairs.push_back({0, 0, 47, 0});
    Patch p(48, 48);
    for (int v = 0; v < 48; ++v)
        for (int u = 0; u < 48; ++u) p.at(u, v) = u;
    const BitVector bits = mbow::binary_tests(p, pattern);
    CHECK(bits.bit(0));
}

TEST_CASE("binary tests match the per-pair oracle on random patches") {
    const TestPattern pattern = mbow::generate_pattern(2, 512, 48, 48);
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Patch p = oracle::random_patch(48, rng);
        const BitVector bits = mbow::binary_tests(p, pattern);
        for (std::size_t i = 0; i < pattern.bits(); ++i) {
            const auto& pr = pattern.pairs[i];
            CHECK(bits.bit(i) == (p.at(pr.au, pr.av) < p.at(pr.bu, pr.bv)));
        }
    }
}

TEST_CASE("binary tests are invariant to intensity shift and positive scale") {
    const TestPattern pattern = mbow::generate_pattern(3, 512, 48, 48);
    std::mt19937_64 rng(22);
    const Patch p = oracle::random_patch(48, rng);
    Patch shifted = p;
    for (auto& v : shifted.raw) v += 17;
    Patch scaled = p;
    for (auto& v : scaled.raw) v *= 5;
    const BitVector base = mbow::binary_tests(p, pattern);
    CHECK(mbow::binary_tests(shifted, pattern) == base);
    CHECK(mbow::binary_tests(scaled, pattern) == base);
}

TEST_CASE("binary tests reject mismatched dimensions") {
    const TestPattern pattern = mbow::generate_pattern(4, 16, 48, 48);
    const Patch p(32, 32);
    CHECK_THROWS_AS(mbow::binary_tests(p, pattern), std::invalid_argument);
}

TEST_CASE("mean-patch monotonicity: agreeing bits survive on the exact mean") {
    const TestPattern pattern = mbow::generate_pattern(5, 512, 48, 48);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const Patch a = oracle::random_patch(48, rng);
        const Patch b = oracle::random_patch(48, rng);
        const BitVector xa = mbow::binary_tests(a, pattern);
        const BitVector xb = mbow::binary_tests(b, pattern);
        const BitVector xm = mbow::binary_tests(mbow::mean_patch(a, b), pattern);
        for (std::size_t i = 0; i < pattern.bits(); ++i)
            if (xa.bit(i) == xb.bit(i)) CHECK(xm.bit(i) == xa.bit(i));
    }
}

TEST_CASE("intra-class distance: trivial cases") {
    const BitVector one = BitVector::from_string("1");
    const BitVector zero = BitVector::from_string("0");

    std::vector<BitVector> identical(5, BitVector::from_string("1011"));
    CHECK(mbow::expected_intra_class_distance(identical) == doctest::Approx(0.0));

    // Two one-bit descriptors {1, 0}: 2 * 0.5 - 2 * 0.25 = 0.5.
    std::vector<BitVector> pair{one, zero};
    CHECK(mbow::expected_intra_class_distance(pair) == doctest::Approx(0.5));

    CHECK_THROWS_AS(mbow::expected_intra_class_distance({}), std::invalid_argument);
}

TEST_CASE("intra-class distance: closed form equals the double-sum oracle") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 1 + rng() % 10;
        const std::size_t length = 1 + rng() % 64;
        std::vector<BitVector> descriptors;
        std::vector<oracle::Bits> raw;
        for (std::size_t i = 0; i < k; ++i) {
            descriptors.push_back(oracle::random_bitvector(length, rng));
            raw.push_back(oracle::to_bits(descriptors.back()));
        }
        const double closed = mbow::expected_intra_class_distance(descriptors);
        const double brute = oracle::intra_class_double_sum(raw);
        CHECK(closed == doctest::Approx(brute).epsilon(1e-12));
    }
}

TEST_CASE("mean patch compares sums, never divides") {
    Patch a(8, 8), b(8, 8);
    a.at(0, 0) = 3;
    b.at(0, 0) = 4;  // mean 3.5: must stay exact
    const Patch m = mbow::mean_patch(a, b);
    CHECK(m.scale == 2);
    CHECK(m.at(0, 0) == 7);
    CHECK(m.intensity(0, 0) == doctest::Approx(3.5));
}
