#pragma once

// Signature columns u_i for items 1..n, built on demand: the L-bit binary
// index block, its bitwise complement, and one or two pseudorandomly permuted
// check blocks (with complements). The full h x n matrix is never stored; the
// check sequences s1, s2 come from a keyed PRF so n = 2^32 costs nothing.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "saffron/bitvec.hpp"
#include "saffron/prf.hpp"

namespace saffron {

enum class Sections : unsigned { Two = 2, Four = 4, Six = 6 };

inline unsigned section_count(Sections s) { return static_cast<unsigned>(s); }

// MSB-first binary encoding of i-1 in exactly L bits. Item indices are
// 1-based; item 1 encodes the all-zero block.
inline BitVec binary_repr(std::uint64_t i, unsigned L) {
    if (L == 0 || L > 63) throw std::invalid_argument("binary_repr: L out of range");
    if (i < 1 || i > (std::uint64_t{1} << L)) throw std::invalid_argument("binary_repr: index out of range");
    BitVec v(L);
    const std::uint64_t value = i - 1;
    for (unsigned t = 0; t < L; ++t) v.set(t, (value >> (L - 1 - t)) & 1u);
    return v;
}

// Low L bits of x reversed: position-order block bits <-> integer value.
inline std::uint64_t reverse_low_bits(std::uint64_t x, unsigned L) {
    std::uint64_t out = 0;
    for (unsigned t = 0; t < L; ++t) out = (out << 1) | ((x >> t) & 1u);
    return out;
}

// An index block as a register word: bit t of the result is position t of the
// MSB-first block b_i, i.e. the layout extract64 reads back.
inline std::uint64_t index_block_bits(std::uint64_t i, unsigned L) {
    return reverse_low_bits(i - 1, L);
}

// Inverse of binary_repr on an L-bit block starting at offset: returns i-1.
inline std::uint64_t decode_binary(const BitVec& v, std::size_t offset, unsigned L) {
    return reverse_low_bits(v.extract64(offset, L), L);
}

class SignatureSpec {
public:
    SignatureSpec(std::uint64_t n, Sections sections, std::uint64_t seed, bool complemented = true)
        : n_(n), sections_(sections), seed_(seed), complemented_(complemented) {
        validate_n(n);
        L_ = static_cast<unsigned>(std::countr_zero(n));
    }

    // Golden-test constructor with explicit check sequences instead of a PRF.
    static SignatureSpec with_fixture(std::uint64_t n, Sections sections,
                                      std::vector<std::uint64_t> s1,
                                      std::vector<std::uint64_t> s2) {
        SignatureSpec spec(n, sections, 0, true);
        if (s1.size() != n || s2.size() != n)
            throw std::invalid_argument("SignatureSpec: fixture sequences must have length n");
        for (std::uint64_t v : s1)
            if (v < 1 || v > n) throw std::invalid_argument("SignatureSpec: fixture s1 out of range");
        for (std::uint64_t v : s2)
            if (v < 1 || v > n) throw std::invalid_argument("SignatureSpec: fixture s2 out of range");
        spec.fixture_s1_ = std::move(s1);
        spec.fixture_s2_ = std::move(s2);
        return spec;
    }

    std::uint64_t n() const { return n_; }
    unsigned L() const { return L_; }
    Sections sections() const { return sections_; }
    std::uint64_t seed() const { return seed_; }
    bool complemented() const { return complemented_; }
    bool has_fixture() const { return !fixture_s1_.empty(); }
    const std::vector<std::uint64_t>& fixture_s1() const { return fixture_s1_; }
    const std::vector<std::uint64_t>& fixture_s2() const { return fixture_s2_; }

    unsigned column_bits() const { return section_count(sections_) * L_; }

    // (s1(i), s2(i)), both in [1, n], deterministic given the seed.
    std::pair<std::uint64_t, std::uint64_t> check_sequences(std::uint64_t i) const {
        check_index(i);
        if (has_fixture()) return {fixture_s1_[i - 1], fixture_s2_[i - 1]};
        const std::uint64_t mask = n_ - 1;  // n is a power of two
        return {1 + (prf(seed_, seed_domain::kCheckS1, i) & mask),
                1 + (prf(seed_, seed_domain::kCheckS2, i) & mask)};
    }

    void check_index(std::uint64_t i) const {
        if (i < 1 || i > n_) throw std::invalid_argument("SignatureSpec: item index out of range");
    }

    bool operator==(const SignatureSpec&) const = default;

private:
    static void validate_n(std::uint64_t n) {
        if (n < 2 || (n & (n - 1)) != 0)
            throw std::invalid_argument("SignatureSpec: n must be a power of two >= 2");
    }

    std::uint64_t n_;
    unsigned L_;
    Sections sections_;
    std::uint64_t seed_;
    bool complemented_;
    std::vector<std::uint64_t> fixture_s1_;
    std::vector<std::uint64_t> fixture_s2_;
};

// Column u_i: [b_i; ~b_i] for two sections, plus [b_s1; ~b_s1] for four,
// plus [b_s2; ~b_s2] for six. Length sections * L.
inline BitVec signature_column(const SignatureSpec& spec, std::uint64_t i) {
    spec.check_index(i);
    if (!spec.complemented())
        throw std::logic_error("signature_column: uncomplemented layouts are handled by the robust path");
    const unsigned L = spec.L();
    const unsigned sections = section_count(spec.sections());
    BitVec col(sections * L);

    auto put_pair = [&](unsigned pair_index, std::uint64_t item) {
        const BitVec block = binary_repr(item, L);
        const std::size_t base = std::size_t{2} * pair_index * L;
        for (unsigned t = 0; t < L; ++t) {
            const bool bit = block.get(t);
            col.set(base + t, bit);
            col.set(base + L + t, !bit);
        }
    };

    put_pair(0, i);
    if (sections >= 4) {
        const auto [s1, s2] = spec.check_sequences(i);
        put_pair(1, s1);
        if (sections >= 6) put_pair(2, s2);
    }
    return col;
}

}  // namespace saffron
