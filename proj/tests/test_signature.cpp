#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "fixtures.hpp"
#include "saffron/signature.hpp"

using namespace saffron;

TEST_CASE("binary_repr encodes i-1 MSB-first", "[signature]") {
    REQUIRE(binary_repr(1, 3).to_bit_string() == "000");
    REQUIRE(binary_repr(3, 3).to_bit_string() == "010");
    REQUIRE(binary_repr(8, 3).to_bit_string() == "111");
    REQUIRE_THROWS_AS(binary_repr(0, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(binary_repr(9, 3), std::invalid_argument);
}

TEST_CASE("binary_repr is a bijection with decode_binary", "[signature]") {
    for (unsigned L : {3u, 8u, 16u}) {
        for (std::uint64_t i = 1; i <= (std::uint64_t{1} << L); ++i) {
            REQUIRE(decode_binary(binary_repr(i, L), 0, L) == i - 1);
        }
    }
}

TEST_CASE("spec validates n and fixture arrays", "[signature]") {
    REQUIRE_THROWS_AS(SignatureSpec(12, Sections::Six, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(SignatureSpec(0, Sections::Six, 1), std::invalid_argument);
    REQUIRE_NOTHROW(SignatureSpec(std::uint64_t{1} << 32, Sections::Six, 1));
    REQUIRE(SignatureSpec(std::uint64_t{1} << 32, Sections::Six, 1).L() == 32);
    REQUIRE_THROWS_AS(SignatureSpec::with_fixture(8, Sections::Six, {1, 2}, {1, 2}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(SignatureSpec::with_fixture(4, Sections::Six, {1, 2, 3, 9}, {1, 2, 3, 4}),
                      std::invalid_argument);
}

TEST_CASE("fixture check sequences match the worked example", "[signature]") {
    const SignatureSpec spec = fixtures::worked_example_signature();
    REQUIRE(spec.check_sequences(8) == std::pair<std::uint64_t, std::uint64_t>{6, 7});
    REQUIRE(spec.check_sequences(1) == std::pair<std::uint64_t, std::uint64_t>{5, 3});
    REQUIRE_THROWS_AS(spec.check_sequences(0), std::invalid_argument);
    REQUIRE_THROWS_AS(spec.check_sequences(9), std::invalid_argument);
}

TEST_CASE("check sequences are pure and in range", "[signature]") {
    const SignatureSpec spec(1024, Sections::Six, 0xFEEDu);
    for (std::uint64_t i = 1; i <= 1024; ++i) {
        const auto a = spec.check_sequences(i);
        const auto b = spec.check_sequences(i);
        REQUIRE(a == b);
        REQUIRE(a.first >= 1);
        REQUIRE(a.first <= 1024);
        REQUIRE(a.second >= 1);
        REQUIRE(a.second <= 1024);
    }
}

TEST_CASE("PRF check sequences look uniform", "[signature]") {
    // 64 bins over [1, n], expected 16 per bin per sequence at n = 2^10;
    // chi-square dof 63, mean 63, sd ~11.2
    const SignatureSpec spec(1024, Sections::Six, 0x5EEDu);
    std::vector<int> h1(64, 0), h2(64, 0);
    for (std::uint64_t i = 1; i <= 1024; ++i) {
        const auto [s1, s2] = spec.check_sequences(i);
        ++h1[(s1 - 1) / 16];
        ++h2[(s2 - 1) / 16];
    }
    for (const auto& h : {h1, h2}) {
        double chi2 = 0;
        for (int c : h) {
            const double d = c - 16.0;
            chi2 += d * d / 16.0;
        }
        REQUIRE(chi2 < 110.0);
    }
}

TEST_CASE("signature column matches the worked example", "[signature]") {
    const SignatureSpec spec = fixtures::worked_example_signature();
    REQUIRE(signature_column(spec, 3).to_bit_string() == "010101011100100011");
    // u_1 OR u_8 equals the third displayed measurement vector
    const BitVec u1 = signature_column(spec, 1);
    const BitVec u8 = signature_column(spec, 8);
    REQUIRE((u1 | u8).to_bit_string() == fixtures::kZBits[2]);
}

TEST_CASE("column weight law, exhaustively at n = 2^10", "[signature]") {
    const SignatureSpec spec(1024, Sections::Six, 0xABCDu);
    const unsigned L = spec.L();
    std::vector<BitVec> cols;
    cols.reserve(1024);
    for (std::uint64_t i = 1; i <= 1024; ++i) {
        cols.push_back(signature_column(spec, i));
        REQUIRE(cols.back().weight() == std::size_t{3} * L);  // singleton weight
    }
    // every pair ORs to weight strictly above 3L
    for (std::size_t a = 0; a < cols.size(); ++a) {
        const std::uint64_t bits_a = cols[a].extract64(0, 60);
        for (std::size_t b = a + 1; b < cols.size(); ++b) {
            const std::uint64_t both = bits_a | cols[b].extract64(0, 60);
            REQUIRE(static_cast<unsigned>(__builtin_popcountll(both)) > 3 * L);
        }
    }
}

TEST_CASE("two-section columns carry index block plus complement", "[signature]") {
    const SignatureSpec spec(16, Sections::Two, 9);
    const BitVec col = signature_column(spec, 5);
    REQUIRE(col.size() == 8);
    REQUIRE(col.extract64(0, 4) == (col.extract64(4, 4) ^ 0xF));
    REQUIRE(col.weight() == 4);
}
