#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

#include "error.hpp"

namespace spl {

using u32 = uint32_t;
using u64 = uint64_t;
using u128 = unsigned __int128;

// Exact aggregates (sums of squared energies etc.) that can outgrow 128 bits.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr u128 u128_max() { return ~u128(0); }

// Counts are kept in 128-bit words; anything certified to exceed 2^127 is an error.
inline constexpr u128 count_limit() { return u128(1) << 127; }

inline u128 checked_add(u128 a, u128 b) {
    if (a > u128_max() - b) fail(Errc::overflow_guard, "128-bit addition overflow");
    return a + b;
}

inline u128 checked_mul(u128 a, u128 b) {
    if (a != 0 && b > u128_max() / a) fail(Errc::overflow_guard, "128-bit multiplication overflow");
    return a * b;
}

// min(a*b, c*d) with saturation at u128_max instead of wraparound.
inline u128 saturating_mul(u128 a, u128 b) {
    if (a != 0 && b > u128_max() / a) return u128_max();
    return a * b;
}

inline std::string to_string_u128(u128 v) {
    if (v == 0) return "0";
    char buf[40];
    int pos = 40;
    while (v > 0) {
        buf[--pos] = char('0' + int(v % 10));
        v /= 10;
    }
    return std::string(buf + pos, buf + 40);
}

inline BigInt to_bigint(u128 v) {
    return BigInt(v); // boost cpp_int handles unsigned __int128 natively
}

// Rationals serialize as "num/den" in lowest terms, slash always present.
inline std::string rational_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

} // namespace spl
