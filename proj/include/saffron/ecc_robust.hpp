#pragma once

// Noise-robust signature layer: every L-bit index block is zero-padded to ck
// bytes and Reed-Solomon encoded before entering the column. Two layouts:
//   SixComplemented - encoded blocks plus complements; doubleton extraction
//                     needs the complements, used by robust SAFFRON.
//   ThreePlain      - three encoded blocks, no complements, used by the
//                     robust Singleton-Only scheme.
// Noisy singleton detection RS-decodes the three plain sections and accepts
// only when both check equations hold; the weight test is useless under noise.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "saffron/bitvec.hpp"
#include "saffron/channel.hpp"
#include "saffron/peeling_decoder.hpp"
#include "saffron/pool_design.hpp"
#include "saffron/reed_solomon.hpp"
#include "saffron/signature.hpp"

namespace saffron {

struct EccSpec {
    unsigned cq = 256;
    unsigned ck = 0;
    unsigned cn = 0;

    unsigned t() const { return (cn - ck) / 2; }
    double rate() const { return static_cast<double>(ck) / static_cast<double>(cn); }
    bool operator==(const EccSpec&) const = default;
};

enum class RobustLayout { SixComplemented, ThreePlain };

class RobustSignatureSpec {
public:
    RobustSignatureSpec(SignatureSpec base, EccSpec ecc, RobustLayout layout)
        : base_(std::move(base)), ecc_(ecc), layout_(layout), codec_(ecc.cn, ecc.ck) {
        if (ecc.cq != 256) throw std::invalid_argument("RobustSignatureSpec: only GF(256) codes");
        if (ecc.ck * 8u < base_.L())
            throw std::invalid_argument("RobustSignatureSpec: ck bytes cannot hold L index bits");
    }

    const SignatureSpec& base() const { return base_; }
    const EccSpec& ecc() const { return ecc_; }
    RobustLayout layout() const { return layout_; }
    const ReedSolomon& codec() const { return codec_; }

    unsigned sections() const { return layout_ == RobustLayout::SixComplemented ? 6u : 3u; }
    unsigned section_bits() const { return ecc_.cn * 8u; }
    unsigned column_bits() const { return sections() * section_bits(); }

    // Codeword of the zero-padded big-endian (i - 1).
    std::vector<std::uint8_t> encode_index(std::uint64_t i) const {
        base_.check_index(i);
        std::vector<std::uint8_t> msg(ecc_.ck, 0);
        std::uint64_t value = i - 1;
        for (unsigned b = ecc_.ck; b-- > 0 && value != 0;) {
            msg[b] = static_cast<std::uint8_t>(value & 0xFF);
            value >>= 8;
        }
        return codec_.encode(msg);
    }

    // Index from decoded message bytes; nullopt when out of [1, n].
    std::optional<std::uint64_t> index_from_message(const std::vector<std::uint8_t>& msg) const {
        std::uint64_t value = 0;
        for (std::uint8_t b : msg) {
            if (value >> 56) return std::nullopt;
            value = (value << 8) | b;
        }
        if (value >= base_.n()) return std::nullopt;
        return value + 1;
    }

    bool operator==(const RobustSignatureSpec& other) const {
        return base_ == other.base_ && ecc_ == other.ecc_ && layout_ == other.layout_;
    }

private:
    SignatureSpec base_;
    EccSpec ecc_;
    RobustLayout layout_;
    ReedSolomon codec_;
};

namespace detail {

inline void put_codeword(BitVec& col, std::size_t base, const std::vector<std::uint8_t>& cw,
                         bool complemented) {
    for (std::size_t c = 0; c < cw.size(); ++c) {
        const std::uint8_t byte = complemented ? static_cast<std::uint8_t>(~cw[c]) : cw[c];
        for (unsigned j = 0; j < 8; ++j) col.set(base + 8 * c + j, (byte >> (7 - j)) & 1u);
    }
}

inline std::vector<std::uint8_t> read_section_bytes(const BitVec& z, std::size_t base,
                                                    unsigned cn) {
    std::vector<std::uint8_t> bytes(cn, 0);
    for (unsigned c = 0; c < cn; ++c) {
        std::uint8_t byte = 0;
        for (unsigned j = 0; j < 8; ++j)
            byte = static_cast<std::uint8_t>((byte << 1) | (z.get(base + 8 * c + j) ? 1u : 0u));
        bytes[c] = byte;
    }
    return bytes;
}

// Masked extraction over a (plain, complement) section pair: where the known
// codeword bit is 0 the plain section carries the partner's bit, where it is 1
// the complement section carries its inverse. Noise statistics pass through
// unchanged.
inline std::vector<std::uint8_t> extract_partner_codeword(const BitVec& z,
                                                          const std::vector<std::uint8_t>& known_cw,
                                                          std::size_t plain_base,
                                                          std::size_t comp_base) {
    std::vector<std::uint8_t> bytes(known_cw.size(), 0);
    for (std::size_t c = 0; c < known_cw.size(); ++c) {
        std::uint8_t byte = 0;
        for (unsigned j = 0; j < 8; ++j) {
            const bool known_bit = (known_cw[c] >> (7 - j)) & 1u;
            const std::size_t off = 8 * c + j;
            const bool bit = known_bit ? !z.get(comp_base + off) : z.get(plain_base + off);
            byte = static_cast<std::uint8_t>((byte << 1) | (bit ? 1u : 0u));
        }
        bytes[c] = byte;
    }
    return bytes;
}

}  // namespace detail

inline BitVec robust_signature_column(const RobustSignatureSpec& spec, std::uint64_t i) {
    const auto [s1, s2] = spec.base().check_sequences(i);
    const auto cw0 = spec.encode_index(i);
    const auto cw1 = spec.encode_index(s1);
    const auto cw2 = spec.encode_index(s2);
    const unsigned B = spec.section_bits();
    BitVec col(spec.column_bits());
    if (spec.layout() == RobustLayout::SixComplemented) {
        detail::put_codeword(col, 0, cw0, false);
        detail::put_codeword(col, B, cw0, true);
        detail::put_codeword(col, std::size_t{2} * B, cw1, false);
        detail::put_codeword(col, std::size_t{3} * B, cw1, true);
        detail::put_codeword(col, std::size_t{4} * B, cw2, false);
        detail::put_codeword(col, std::size_t{5} * B, cw2, true);
    } else {
        detail::put_codeword(col, 0, cw0, false);
        detail::put_codeword(col, B, cw1, false);
        detail::put_codeword(col, std::size_t{2} * B, cw2, false);
    }
    return col;
}

// RS-decode the three plain sections into l1, l2, l3 and accept l1 only when
// all three decodes succeed and l2 = s1(l1), l3 = s2(l1).
inline std::optional<std::uint64_t> robust_detect_singleton(const BitVec& z,
                                                            const RobustSignatureSpec& spec) {
    if (z.size() != spec.column_bits())
        throw std::invalid_argument("robust_detect_singleton: measurement length mismatch");
    const unsigned B = spec.section_bits();
    const unsigned cn = spec.ecc().cn;
    const bool six = spec.layout() == RobustLayout::SixComplemented;
    const std::size_t bases[3] = {0, std::size_t{six ? 2u : 1u} * B, std::size_t{six ? 4u : 2u} * B};

    std::uint64_t idx[3];
    for (int s = 0; s < 3; ++s) {
        const auto word = detail::read_section_bytes(z, bases[s], cn);
        const auto msg = spec.codec().decode(word);
        if (!msg) return std::nullopt;
        const auto value = spec.index_from_message(*msg);
        if (!value) return std::nullopt;
        idx[s] = *value;
    }
    const auto [s1, s2] = spec.base().check_sequences(idx[0]);
    if (idx[1] != s1 || idx[2] != s2) return std::nullopt;
    return idx[0];
}

// Doubleton resolution for the complemented layout: extract the partner's
// three noisy codewords with the known column as mask, RS-decode each, then
// apply the same check equations. Rejects the degenerate self-match.
inline std::optional<std::uint64_t> robust_resolve_doubleton(const BitVec& z, std::uint64_t known,
                                                             const RobustSignatureSpec& spec) {
    if (spec.layout() != RobustLayout::SixComplemented)
        throw std::invalid_argument("robust_resolve_doubleton: needs the complemented layout");
    if (z.size() != spec.column_bits())
        throw std::invalid_argument("robust_resolve_doubleton: measurement length mismatch");
    const unsigned B = spec.section_bits();
    const auto [known_s1, known_s2] = spec.base().check_sequences(known);
    const std::uint64_t known_blocks[3] = {known, known_s1, known_s2};

    std::uint64_t idx[3];
    for (int s = 0; s < 3; ++s) {
        const auto mask_cw = spec.encode_index(known_blocks[s]);
        const auto word = detail::extract_partner_codeword(z, mask_cw, std::size_t{2u * s} * B,
                                                           std::size_t{2u * s + 1u} * B);
        const auto msg = spec.codec().decode(word);
        if (!msg) return std::nullopt;
        const auto value = spec.index_from_message(*msg);
        if (!value) return std::nullopt;
        idx[s] = *value;
    }
    if (idx[0] == known) return std::nullopt;
    const auto [s1, s2] = spec.base().check_sequences(idx[0]);
    if (idx[1] != s1 || idx[2] != s2) return std::nullopt;
    return idx[0];
}

inline MeasurementSet measure_robust(const PoolDesign& design, const SupportVector& x,
                                     const RobustSignatureSpec& spec) {
    if (spec.base().n() != design.n())
        throw std::invalid_argument("measure_robust: signature does not match design");
    return measure_with(design, x, spec.column_bits(),
                        [&](std::uint64_t i) { return robust_signature_column(spec, i); });
}

struct RobustNodeDecoder {
    const RobustSignatureSpec& spec;
    std::optional<std::uint64_t> singleton(const BitVec& z) const {
        return robust_detect_singleton(z, spec);
    }
    std::optional<std::uint64_t> doubleton(const BitVec& z, std::uint64_t known) const {
        return robust_resolve_doubleton(z, known, spec);
    }
};

inline DecodeResult robust_peel(const MeasurementSet& ms, const PoolDesign& design,
                                const RobustSignatureSpec& spec,
                                std::span<const std::uint64_t> node_order = {}) {
    if (spec.layout() != RobustLayout::SixComplemented)
        throw std::invalid_argument("robust_peel: needs the complemented layout");
    RobustNodeDecoder decoder{spec};
    return detail::peel_with(ms, design, decoder, node_order, true);
}

inline DecodeResult robust_decode_singleton_only(const MeasurementSet& ms,
                                                 const PoolDesign& design,
                                                 const RobustSignatureSpec& spec) {
    RobustNodeDecoder decoder{spec};
    return detail::peel_with(ms, design, decoder, {}, false);
}

}  // namespace saffron
