#pragma once

#include <memory>
#include <vector>

#include "exact.hpp"

namespace spl {

// Deterministic Miller-Rabin with the standard witness set
// {2,3,5,7,11,13,17,19,23,29,31,37}; exact for all 64-bit inputs.
bool is_prime(u64 n);

u64 mod_mul(u64 a, u64 b, u64 m);
u64 mod_pow(u64 base, u64 exp, u64 m);

// Multiplicative inverse mod a prime p. ZeroInverse if a == 0.
u64 mod_inverse(u64 a, u64 p);

// Distinct prime factors by trial division.
std::vector<u64> prime_factors(u64 n);

// Least g >= 1 generating F_p^*. NotPrime if p fails the primality check.
u64 smallest_primitive_root(u64 p);

// Table memory budget: two 4-byte tables of length ~p stay under 1 GiB.
inline constexpr u64 default_table_cap = u64(1) << 26;

// Prime field with primitive root and discrete-log/exp tables.
// Immutable after construction; concurrent reads are safe.
class PrimeField {
  public:
    explicit PrimeField(u64 p, u64 table_cap = default_table_cap);

    u64 p() const { return p_; }
    u64 generator() const { return g_; }

    // exp(k) = g^k for k in [0, p-1)
    u64 exp(u64 k) const { return exp_[k]; }
    // dlog(x) for x in [1, p); throws BadParameter on x = 0
    u64 dlog(u64 x) const;

    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p_ ? s - p_ : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : p_ - a; }
    u64 mul(u64 a, u64 b) const { return mod_mul(a, b, p_); }
    u64 pow(u64 base, u64 e) const { return mod_pow(base, e, p_); }
    u64 inv(u64 a) const { return mod_inverse(a, p_); }

    const std::vector<u32>& exp_table() const { return exp_; }
    const std::vector<u32>& dlog_table() const { return dlog_; }

  private:
    u64 p_;
    u64 g_;
    std::vector<u32> exp_;  // length p-1
    std::vector<u32> dlog_; // length p, entry 0 unused
};

using FieldPtr = std::shared_ptr<const PrimeField>;

FieldPtr make_field(u64 p, u64 table_cap = default_table_cap);

} // namespace spl
