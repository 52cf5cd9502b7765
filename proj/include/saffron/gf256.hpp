#pragma once

// GF(2^8) arithmetic with primitive polynomial 0x11D and generator alpha = 2.
// Log/antilog tables are built at compile time; the antilog table is doubled
// so products need no modular reduction of the exponent sum.

#include <array>
#include <cstdint>

namespace saffron::gf256 {

struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<std::uint16_t, 256> log{};
};

inline constexpr Tables make_tables() {
    Tables t{};
    unsigned x = 1;
    for (unsigned i = 0; i < 255; ++i) {
        t.exp[i] = static_cast<std::uint8_t>(x);
        t.log[x] = static_cast<std::uint16_t>(i);
        x <<= 1;
        if (x & 0x100) x ^= 0x11D;
    }
    for (unsigned i = 255; i < 512; ++i) t.exp[i] = t.exp[i - 255];
    t.log[0] = 511;  // sentinel, never a valid exponent
    return t;
}

inline constexpr Tables tables = make_tables();

inline constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

inline constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
    if (a == 0 || b == 0) return 0;
    return tables.exp[tables.log[a] + tables.log[b]];
}

inline constexpr std::uint8_t inv(std::uint8_t a) {
    return tables.exp[255 - tables.log[a]];  // a must be nonzero
}

inline constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) {
    if (a == 0) return 0;
    return tables.exp[tables.log[a] + 255 - tables.log[b]];
}

// alpha^e for any e >= 0
inline constexpr std::uint8_t alpha_pow(unsigned e) { return tables.exp[e % 255]; }

}  // namespace saffron::gf256
