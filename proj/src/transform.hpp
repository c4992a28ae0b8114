#pragma once

#include "sets.hpp"

namespace spl {

// Domain of a representation function: indexed by F_p (additive) or by
// exponents in Z_{p-1} via the discrete log (multiplicative).
enum class Domain { additive, multiplicative };

// Exact nonnegative-integer-valued function on F_p or Z_{p-1}.
// Entries up to 2^127; no rounding anywhere in the pipeline.
class RepFn {
  public:
    RepFn(FieldPtr field, Domain domain);
    RepFn(FieldPtr field, Domain domain, std::vector<u128> values);

    Domain domain() const { return domain_; }
    u64 length() const { return u64(values_.size()); }
    u128 at(u64 index) const { return values_[index]; }
    const std::vector<u128>& values() const { return values_; }
    u128 total() const { return total_; }
    u128 max_value() const;
    u64 support_size() const;
    const PrimeField& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }

    // Copy with the entry at 0 dropped (additive domain only).
    RepFn restrict_nonzero() const;
    // Reindex through dlog/exp. additive (values on F_p^*, entry 0 dropped)
    // <-> multiplicative (values on Z_{p-1}).
    RepFn to_multiplicative() const;
    RepFn to_additive() const;

  private:
    FieldPtr field_;
    Domain domain_;
    std::vector<u128> values_;
    u128 total_;
};

// r[x] = #{(a,b) in A x B : a +- b = x}; total |A||B|.
RepFn additive_rep(const FpSet& a, const FpSet& b, Sign sign);
RepFn naive_additive_rep(const FpSet& a, const FpSet& b, Sign sign);

// result[x] = sum over s*t = x, s,t != 0, of f(s) h(t). Inputs additive-domain
// with the entry at 0 ignored; the result carries 0 at index 0.
RepFn mult_convolution(const RepFn& f, const RepFn& h);
RepFn naive_mult_convolution(const RepFn& f, const RepFn& h);

// ac[xi-1] = sum over t != 0 of f(t) f(t xi^-1) for every xi in F_p^*.
// In dlog coordinates this is the cyclic autocorrelation of f o exp.
std::vector<u128> mult_autocorrelation(const RepFn& f);
std::vector<u128> naive_mult_autocorrelation(const RepFn& f);

namespace detail {

enum class ConvMode { automatic, force_naive, force_transform };

// Below this support size the quadratic path beats transform setup.
inline constexpr u64 naive_cutover = 64;

// Exact cyclic convolution of two dense length-`period` arrays. Transform
// path: residues modulo enough 32-bit NTT primes to exceed a certified bound
// on the output magnitude, zero-padded power-of-two transforms, folded back,
// reconstructed by CRT. OverflowGuard if the certified bound exceeds 2^127.
std::vector<u128> exact_cyclic_convolution(const std::vector<u128>& f, const std::vector<u128>& h,
                                           ConvMode mode = ConvMode::automatic);

struct NttPrime {
    u64 q;
    u64 g;
};

// 32-bit primes with 2^27 | q-1: transforms up to length 2^27 cover cyclic
// periods up to the table cap; the product of all five exceeds 2^157.
std::span<const NttPrime> ntt_primes();

} // namespace detail

} // namespace spl
