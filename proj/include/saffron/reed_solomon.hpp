#pragma once

// Systematic Reed-Solomon codec over GF(2^8), shortened to arbitrary
// (cn, ck) with cn <= 255. Roots of the generator are alpha^1 .. alpha^(cn-ck)
// (fcr = 1). Decoding is syndrome-based: Berlekamp-Massey for the error
// locator, Chien search over the shortened positions, Forney for the error
// values. Bounded-distance: up to floor((cn-ck)/2) symbol errors are
// corrected, anything beyond yields a decode failure (or an undetectable
// miscorrection to another codeword, as for any bounded-distance decoder).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "saffron/gf256.hpp"

namespace saffron {

class ReedSolomon {
public:
    ReedSolomon(unsigned cn, unsigned ck) : cn_(cn), ck_(ck) {
        if (ck == 0 || ck >= cn || cn > 255)
            throw std::invalid_argument("ReedSolomon: need 1 <= ck < cn <= 255");
        const unsigned p = cn - ck;
        // g(x) = prod_{j=1..p} (x - alpha^j), coefficients descending, monic
        gen_.assign(p + 1, 0);
        gen_[0] = 1;
        for (unsigned j = 1; j <= p; ++j) {
            const std::uint8_t root = gf256::alpha_pow(j);
            for (unsigned i = j; i > 0; --i)
                gen_[i] = gf256::add(gen_[i - 1], gf256::mul(gen_[i], root));
            gen_[0] = gf256::mul(gen_[0], root);
        }
        // gen_ was built low-to-high above; flip to descending order
        std::reverse(gen_.begin(), gen_.end());
    }

    unsigned cn() const { return cn_; }
    unsigned ck() const { return ck_; }
    unsigned parity() const { return cn_ - ck_; }
    unsigned t() const { return (cn_ - ck_) / 2; }
    double rate() const { return static_cast<double>(ck_) / static_cast<double>(cn_); }

    // Systematic: codeword = [message, parity].
    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> msg) const {
        if (msg.size() != ck_) throw std::invalid_argument("ReedSolomon::encode: message length");
        const unsigned p = parity();
        std::vector<std::uint8_t> word(cn_, 0);
        std::copy(msg.begin(), msg.end(), word.begin());
        std::vector<std::uint8_t> rem(p, 0);
        for (unsigned i = 0; i < ck_; ++i) {
            const std::uint8_t fb = gf256::add(msg[i], rem[0]);
            for (unsigned j = 0; j + 1 < p; ++j)
                rem[j] = gf256::add(rem[j + 1], gf256::mul(fb, gen_[j + 1]));
            rem[p - 1] = gf256::mul(fb, gen_[p]);
        }
        std::copy(rem.begin(), rem.end(), word.begin() + ck_);
        return word;
    }

    // Corrected message, or nullopt when no codeword lies within distance t.
    std::optional<std::vector<std::uint8_t>> decode(std::span<const std::uint8_t> word) const {
        if (word.size() != cn_) throw std::invalid_argument("ReedSolomon::decode: word length");
        const unsigned p = parity();

        // syndromes S_j = c(alpha^(j+1)), Horner over descending coefficients
        std::vector<std::uint8_t> synd(p, 0);
        bool clean = true;
        for (unsigned j = 0; j < p; ++j) {
            const std::uint8_t x = gf256::alpha_pow(j + 1);
            std::uint8_t acc = 0;
            for (unsigned i = 0; i < cn_; ++i) acc = gf256::add(gf256::mul(acc, x), word[i]);
            synd[j] = acc;
            if (acc != 0) clean = false;
        }
        if (clean) return std::vector<std::uint8_t>(word.begin(), word.begin() + ck_);

        // Berlekamp-Massey, locator coefficients ascending: lambda[0] = 1
        std::vector<std::uint8_t> lambda{1}, prev{1};
        unsigned errs = 0, m = 1;
        std::uint8_t b = 1;
        for (unsigned r = 0; r < p; ++r) {
            std::uint8_t delta = synd[r];
            for (unsigned i = 1; i <= errs && i < lambda.size(); ++i)
                delta = gf256::add(delta, gf256::mul(lambda[i], synd[r - i]));
            if (delta == 0) {
                ++m;
            } else if (2 * errs <= r) {
                const std::vector<std::uint8_t> saved = lambda;
                const std::uint8_t coef = gf256::div(delta, b);
                if (lambda.size() < prev.size() + m) lambda.resize(prev.size() + m, 0);
                for (unsigned i = 0; i < prev.size(); ++i)
                    lambda[i + m] = gf256::add(lambda[i + m], gf256::mul(coef, prev[i]));
                errs = r + 1 - errs;
                prev = saved;
                b = delta;
                m = 1;
            } else {
                const std::uint8_t coef = gf256::div(delta, b);
                if (lambda.size() < prev.size() + m) lambda.resize(prev.size() + m, 0);
                for (unsigned i = 0; i < prev.size(); ++i)
                    lambda[i + m] = gf256::add(lambda[i + m], gf256::mul(coef, prev[i]));
                ++m;
            }
        }
        if (errs > t()) return std::nullopt;

        // Chien search restricted to the shortened positions: word[i] carries
        // degree cn-1-i, its locator is alpha^(cn-1-i).
        std::vector<unsigned> err_pos;
        for (unsigned i = 0; i < cn_; ++i) {
            const unsigned e = cn_ - 1 - i;
            const std::uint8_t x_inv = gf256::alpha_pow(255 - (e % 255));
            std::uint8_t acc = 0;
            for (unsigned k = lambda.size(); k-- > 0;)
                acc = gf256::add(gf256::mul(acc, x_inv), lambda[k]);
            if (acc == 0) err_pos.push_back(i);
        }
        if (err_pos.size() != errs) return std::nullopt;

        // Forney: omega = S(x) lambda(x) mod x^p, e_i = omega(Xi^-1)/lambda'(Xi^-1)
        std::vector<std::uint8_t> omega(p, 0);
        for (unsigned i = 0; i < p; ++i) {
            std::uint8_t acc = 0;
            for (unsigned k = 0; k <= i && k < lambda.size(); ++k)
                acc = gf256::add(acc, gf256::mul(synd[i - k], lambda[k]));
            omega[i] = acc;
        }
        std::vector<std::uint8_t> corrected(word.begin(), word.end());
        for (unsigned i : err_pos) {
            const unsigned e = (cn_ - 1 - i) % 255;
            const std::uint8_t x_inv = gf256::alpha_pow(255 - e);
            std::uint8_t num = 0;
            for (unsigned k = omega.size(); k-- > 0;)
                num = gf256::add(gf256::mul(num, x_inv), omega[k]);
            std::uint8_t den = 0;  // lambda'(x) keeps only odd-degree terms
            for (unsigned k = 1; k < lambda.size(); k += 2) {
                std::uint8_t term = lambda[k];
                for (unsigned rep = 0; rep + 1 < k; ++rep) term = gf256::mul(term, x_inv);
                den = gf256::add(den, term);
            }
            if (den == 0) return std::nullopt;
            corrected[i] = gf256::add(corrected[i], gf256::div(num, den));
        }

        // recompute syndromes as a final sanity gate
        for (unsigned j = 0; j < p; ++j) {
            const std::uint8_t x = gf256::alpha_pow(j + 1);
            std::uint8_t acc = 0;
            for (unsigned i = 0; i < cn_; ++i) acc = gf256::add(gf256::mul(acc, x), corrected[i]);
            if (acc != 0) return std::nullopt;
        }
        return std::vector<std::uint8_t>(corrected.begin(), corrected.begin() + ck_);
    }

private:
    unsigned cn_, ck_;
    std::vector<std::uint8_t> gen_;  // descending, gen_[0] = 1
};

}  // namespace saffron
