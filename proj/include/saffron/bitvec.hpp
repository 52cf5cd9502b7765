#pragma once

// Packed fixed-length bit vector. Carrier for signature columns, right-node
// measurements and noise masks. Bit order at the API is position order: bit 0
// is the first (leftmost) bit of the vector as written on paper; hex I/O packs
// four positions per nibble, MSB-first.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace saffron {

class BitVec {
public:
    BitVec() = default;

    explicit BitVec(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    static BitVec from_bit_string(std::string_view bits) {
        BitVec v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                v.set(i, true);
            } else if (bits[i] != '0') {
                throw std::invalid_argument("BitVec: bit string must contain only 0/1");
            }
        }
        return v;
    }

    std::size_t size() const { return len_; }

    bool get(std::size_t pos) const {
        check_pos(pos);
        return (words_[pos >> 6] >> (pos & 63)) & 1u;
    }

    void set(std::size_t pos, bool value) {
        check_pos(pos);
        const std::uint64_t mask = std::uint64_t{1} << (pos & 63);
        if (value) {
            words_[pos >> 6] |= mask;
        } else {
            words_[pos >> 6] &= ~mask;
        }
    }

    void flip(std::size_t pos) {
        check_pos(pos);
        words_[pos >> 6] ^= std::uint64_t{1} << (pos & 63);
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (std::uint64_t word : words_) w += static_cast<std::size_t>(__builtin_popcountll(word));
        return w;
    }

    void or_assign(const BitVec& other) {
        if (other.len_ != len_) throw std::invalid_argument("BitVec::or_assign: length mismatch");
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    }

    BitVec operator|(const BitVec& other) const {
        BitVec out = *this;
        out.or_assign(other);
        return out;
    }

    BitVec complemented() const {
        BitVec out(len_);
        for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] = ~words_[i];
        out.mask_tail();
        return out;
    }

    // Bits [pos, pos+count) packed into the low bits of the result, position
    // pos+k at result bit k. count <= 64.
    std::uint64_t extract64(std::size_t pos, unsigned count) const {
        if (count > 64 || pos + count > len_) throw std::invalid_argument("BitVec::extract64: range");
        if (count == 0) return 0;
        const std::size_t w = pos >> 6;
        const unsigned off = static_cast<unsigned>(pos & 63);
        std::uint64_t bits = words_[w] >> off;
        if (off + count > 64) bits |= words_[w + 1] << (64 - off);
        if (count < 64) bits &= (std::uint64_t{1} << count) - 1;
        return bits;
    }

    void deposit64(std::size_t pos, unsigned count, std::uint64_t bits) {
        if (count > 64 || pos + count > len_) throw std::invalid_argument("BitVec::deposit64: range");
        for (unsigned k = 0; k < count; ++k) set(pos + k, (bits >> k) & 1u);
    }

    bool operator==(const BitVec&) const = default;

    std::string to_hex() const {
        static constexpr char digits[] = "0123456789abcdef";
        const std::size_t nibbles = (len_ + 3) / 4;
        std::string out(nibbles, '0');
        for (std::size_t n = 0; n < nibbles; ++n) {
            unsigned val = 0;
            for (unsigned j = 0; j < 4; ++j) {
                const std::size_t pos = 4 * n + j;
                if (pos < len_ && get(pos)) val |= 8u >> j;
            }
            out[n] = digits[val];
        }
        return out;
    }

    static BitVec from_hex(std::string_view hex, std::size_t len) {
        const std::size_t nibbles = (len + 3) / 4;
        if (hex.size() != nibbles) throw std::invalid_argument("BitVec::from_hex: length mismatch");
        BitVec v(len);
        for (std::size_t n = 0; n < nibbles; ++n) {
            const char c = hex[n];
            unsigned val;
            if (c >= '0' && c <= '9') {
                val = static_cast<unsigned>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                val = static_cast<unsigned>(c - 'a') + 10;
            } else {
                throw std::invalid_argument("BitVec::from_hex: invalid hex digit");
            }
            for (unsigned j = 0; j < 4; ++j) {
                const std::size_t pos = 4 * n + j;
                const bool bit = (val >> (3 - j)) & 1u;
                if (pos < len) {
                    v.set(pos, bit);
                } else if (bit) {
                    throw std::invalid_argument("BitVec::from_hex: nonzero padding bits");
                }
            }
        }
        return v;
    }

    std::string to_bit_string() const {
        std::string out(len_, '0');
        for (std::size_t i = 0; i < len_; ++i)
            if (get(i)) out[i] = '1';
        return out;
    }

private:
    void check_pos(std::size_t pos) const {
        if (pos >= len_) throw std::out_of_range("BitVec: position out of range");
    }

    void mask_tail() {
        const unsigned rem = static_cast<unsigned>(len_ & 63);
        if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
    }

    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace saffron
