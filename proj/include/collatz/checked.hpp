#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace collatz {

using u128 = unsigned __int128;

inline constexpr u128 kU128Max = ~u128{0};

/// Raised when an exact result does not fit in 128 bits.
class WidthExceeded : public std::overflow_error {
public:
    explicit WidthExceeded(const std::string& what) : std::overflow_error(what) {}
};

[[nodiscard]] constexpr u128 checked_add(u128 a, u128 b, const char* what = "addition")
{
    if (a > kU128Max - b) throw WidthExceeded(std::string("128-bit overflow in ") + what);
    return a + b;
}

[[nodiscard]] constexpr u128 checked_mul(u128 a, u128 b, const char* what = "multiplication")
{
    if (b != 0 && a > kU128Max / b) throw WidthExceeded(std::string("128-bit overflow in ") + what);
    return a * b;
}

[[nodiscard]] constexpr u128 checked_pow(u128 base, unsigned exp)
{
    u128 r = 1;
    for (unsigned i = 0; i < exp; ++i) r = checked_mul(r, base, "power");
    return r;
}

/// Number of trailing zero bits; v must be nonzero.
[[nodiscard]] constexpr unsigned ctz128(u128 v)
{
    auto lo = static_cast<std::uint64_t>(v);
    if (lo != 0) return static_cast<unsigned>(std::countr_zero(lo));
    return 64u + static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(v >> 64)));
}

[[nodiscard]] constexpr u128 gcd128(u128 a, u128 b)
{
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

[[nodiscard]] std::string to_string(u128 v);

/// Parses an unsigned decimal; throws std::invalid_argument on junk, WidthExceeded on overflow.
[[nodiscard]] u128 parse_u128(std::string_view text);

/// True when v fits in an unsigned 64-bit integer.
[[nodiscard]] constexpr bool fits_u64(u128 v) { return (v >> 64) == 0; }

} // namespace collatz
