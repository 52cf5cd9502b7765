#pragma once

// Keyed 64-bit PRF and a small seeded stream generator. Everything random in
// the library is derived from these, with domain-separation tags, so check
// sequences, graph adjacency, supports and noise are reproducible from seeds
// alone and never stored.

#include <cstdint>

namespace saffron {

// splitmix64 finalizer
inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t prf(std::uint64_t key, std::uint64_t domain, std::uint64_t x) {
    const std::uint64_t h = mix64(key ^ (0x9E3779B97F4A7C15ull * (domain + 1)));
    return mix64(h ^ x);
}

inline constexpr std::uint64_t prf(std::uint64_t key, std::uint64_t domain, std::uint64_t x,
                                   std::uint64_t y) {
    return mix64(prf(key, domain, x) ^ (y + 0xBF58476D1CE4E5B9ull));
}

// 53-bit uniform in [0, 1)
inline constexpr double to_unit(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

namespace seed_domain {
inline constexpr std::uint64_t kCheckS1 = 1;
inline constexpr std::uint64_t kCheckS2 = 2;
inline constexpr std::uint64_t kGraph = 3;
inline constexpr std::uint64_t kBernoulli = 4;
inline constexpr std::uint64_t kNoise = 5;
inline constexpr std::uint64_t kTrial = 6;
inline constexpr std::uint64_t kSupport = 7;
inline constexpr std::uint64_t kSignature = 8;
}  // namespace seed_domain

// splitmix64 stream
struct SplitMix {
    std::uint64_t state = 0;

    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double next_unit() { return to_unit(next()); }

    // unbiased uniform in [0, bound), Lemire multiply-shift with rejection
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0) return 0;
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
        std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }
};

}  // namespace saffron
