#pragma once

// Boolean-OR measurement channel. measure() ORs the signature columns of the
// defective items into their right nodes by walking the pruned graph only, so
// the cost is O(K d sections L) regardless of n. apply_noise() is a binary
// symmetric channel with its own seed, so noise can be re-rolled on a fixed
// design.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "saffron/bitvec.hpp"
#include "saffron/pool_design.hpp"
#include "saffron/prf.hpp"
#include "saffron/signature.hpp"

namespace saffron {

class SupportVector {
public:
    SupportVector(std::uint64_t n, std::vector<std::uint64_t> items) : n_(n), items_(std::move(items)) {
        std::sort(items_.begin(), items_.end());
        for (std::size_t k = 0; k < items_.size(); ++k) {
            if (items_[k] < 1 || items_[k] > n_)
                throw std::invalid_argument("SupportVector: item out of range");
            if (k > 0 && items_[k] == items_[k - 1])
                throw std::invalid_argument("SupportVector: duplicate item");
        }
    }

    // K distinct items uniform over [1, n], deterministic given the seed.
    static SupportVector random(std::uint64_t n, std::uint64_t K, std::uint64_t seed) {
        if (K > n) throw std::invalid_argument("SupportVector: K exceeds n");
        SplitMix rng{prf(seed, seed_domain::kSupport, 0)};
        std::vector<std::uint64_t> items;
        items.reserve(K);
        while (items.size() < K) {
            const std::uint64_t cand = 1 + rng.next_below(n);
            if (std::find(items.begin(), items.end(), cand) == items.end()) items.push_back(cand);
        }
        return SupportVector(n, std::move(items));
    }

    std::uint64_t n() const { return n_; }
    const std::vector<std::uint64_t>& items() const { return items_; }
    std::uint64_t size() const { return items_.size(); }

    bool contains(std::uint64_t i) const {
        return std::binary_search(items_.begin(), items_.end(), i);
    }

private:
    std::uint64_t n_;
    std::vector<std::uint64_t> items_;  // sorted
};

struct MeasurementSet {
    std::uint64_t n = 0;
    std::uint64_t M = 0;
    unsigned bits = 0;          // per-vector test count
    double noise_q = 0.0;       // flip probability actually applied
    std::uint64_t noise_seed = 0;
    std::vector<BitVec> vectors;
};

// Core generator shared by the plain and the encoded signature paths: each
// defective item's column is computed once and ORed into its right nodes.
template <class ColumnFn>
MeasurementSet measure_with(const PoolDesign& design, const SupportVector& x, unsigned bits,
                            ColumnFn&& column) {
    if (x.n() != design.n()) throw std::invalid_argument("measure: support does not match design");
    MeasurementSet ms;
    ms.n = design.n();
    ms.M = design.M();
    ms.bits = bits;
    ms.vectors.assign(design.M(), BitVec(bits));
    for (std::uint64_t item : x.items()) {
        const BitVec col = column(item);
        for (std::uint64_t j : design.neighbors_of_item(item)) ms.vectors[j - 1].or_assign(col);
    }
    return ms;
}

inline MeasurementSet measure(const PoolDesign& design, const SupportVector& x) {
    const SignatureSpec& spec = design.signature();
    return measure_with(design, x, spec.column_bits(),
                        [&](std::uint64_t i) { return signature_column(spec, i); });
}

// BSC(q): every bit flipped independently with probability q. Flip positions
// are drawn by geometric skipping over the concatenated bit stream.
inline MeasurementSet apply_noise(const MeasurementSet& ms, double q, std::uint64_t seed) {
    if (!(q >= 0.0) || q >= 0.5)
        throw std::invalid_argument("apply_noise: q must lie in [0, 1/2)");
    MeasurementSet out = ms;
    out.noise_q = q;
    out.noise_seed = seed;
    if (q == 0.0 || ms.M == 0 || ms.bits == 0) return out;

    const double log1mq = std::log1p(-q);
    const std::uint64_t total = ms.M * static_cast<std::uint64_t>(ms.bits);
    SplitMix rng{prf(seed, seed_domain::kNoise, 0)};
    std::uint64_t base = 0;  // first undecided bit index
    while (base < total) {
        double u = rng.next_unit();
        if (u <= 0.0) u = 0x1.0p-53;
        // geometric gap: unflipped bits before the next flipped one
        const double gap = std::floor(std::log(u) / log1mq);
        if (gap >= static_cast<double>(total - base)) break;
        const std::uint64_t idx = base + static_cast<std::uint64_t>(gap);
        out.vectors[idx / ms.bits].flip(idx % ms.bits);
        base = idx + 1;
    }
    return out;
}

// Dump format: one header line, then one lowercase hex vector per line,
// MSB-first, bit-exact across platforms. Float fields go through to_chars so
// the format never depends on the locale.
inline void write_dump(std::ostream& os, const MeasurementSet& ms) {
    char qbuf[64];
    const auto res =
        std::to_chars(qbuf, qbuf + sizeof qbuf, ms.noise_q, std::chars_format::general, 17);
    os << "SAFFRON-MS v1 n=" << ms.n << " M=" << ms.M << " bits=" << ms.bits << " q="
       << std::string_view(qbuf, res.ptr) << '\n';
    for (const BitVec& v : ms.vectors) os << v.to_hex() << '\n';
}

inline MeasurementSet read_dump(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw std::runtime_error("measurement dump: empty input");
    MeasurementSet ms;
    {
        std::istringstream hs(header);
        std::string magic, version, field;
        hs >> magic >> version;
        if (magic != "SAFFRON-MS" || version != "v1")
            throw std::runtime_error("measurement dump: bad header magic");
        bool have_n = false, have_m = false, have_bits = false, have_q = false;
        while (hs >> field) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) throw std::runtime_error("measurement dump: bad header field");
            const std::string key = field.substr(0, eq);
            const std::string val = field.substr(eq + 1);
            try {
                if (key == "n") {
                    ms.n = std::stoull(val);
                    have_n = true;
                } else if (key == "M") {
                    ms.M = std::stoull(val);
                    have_m = true;
                } else if (key == "bits") {
                    ms.bits = static_cast<unsigned>(std::stoul(val));
                    have_bits = true;
                } else if (key == "q") {
                    const auto res =
                        std::from_chars(val.data(), val.data() + val.size(), ms.noise_q);
                    if (res.ec != std::errc{} || res.ptr != val.data() + val.size())
                        throw std::runtime_error("measurement dump: malformed q value");
                    have_q = true;
                } else {
                    throw std::runtime_error("measurement dump: unknown header field " + key);
                }
            } catch (const std::invalid_argument&) {
                throw std::runtime_error("measurement dump: malformed header value for " + key);
            } catch (const std::out_of_range&) {
                throw std::runtime_error("measurement dump: header value out of range for " + key);
            }
        }
        if (!have_n || !have_m || !have_bits || !have_q)
            throw std::runtime_error("measurement dump: missing header field");
    }
    ms.vectors.reserve(ms.M);
    std::string line;
    for (std::uint64_t k = 0; k < ms.M; ++k) {
        if (!std::getline(is, line))
            throw std::runtime_error("measurement dump: truncated after " + std::to_string(k) +
                                     " of " + std::to_string(ms.M) + " vectors");
        try {
            ms.vectors.push_back(BitVec::from_hex(line, ms.bits));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("measurement dump: vector " + std::to_string(k + 1) + ": " +
                                     e.what());
        }
    }
    return ms;
}

}  // namespace saffron
