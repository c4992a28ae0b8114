#pragma once

#include <span>
#include <vector>

#include "field.hpp"

namespace spl {

enum class Sign { plus, minus };

// Subset of F_p held both as a sorted element array and as a bit vector.
// Immutable after construction.
class FpSet {
  public:
    static FpSet from_elements(FieldPtr field, std::span<const u64> elems);
    // Uniform n-subset, deterministic in seed. Partial Fisher-Yates for
    // n <= p/2, complement sampling above.
    static FpSet random_uniform(FieldPtr field, u64 n, u64 seed);
    // {a0, a0+1, ..., a0+n-1} mod p
    static FpSet interval(FieldPtr field, u64 a0, u64 n);
    // {a0, a0*r, ..., a0*r^(n-1)}; requires ord(r) >= n and a0, r != 0
    static FpSet geometric(FieldPtr field, u64 ratio, u64 a0, u64 n);
    // The multiplicative subgroup of order d; d must divide p-1.
    static FpSet subgroup(FieldPtr field, u64 d);

    // {c + lambda*a : a in A}; lambda != 0
    FpSet affine_image(u64 lambda, u64 c) const;
    FpSet dilate(u64 lambda) const { return affine_image(lambda, 0); }

    u64 size() const { return u64(elems_.size()); }
    bool empty() const { return elems_.empty(); }
    bool contains(u64 x) const { return (bits_[x >> 6] >> (x & 63)) & 1; }
    const std::vector<u64>& elements() const { return elems_; }
    const std::vector<u64>& bit_words() const { return bits_; }
    const PrimeField& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }

    bool operator==(const FpSet& other) const {
        return field_->p() == other.field_->p() && elems_ == other.elems_;
    }

  private:
    FpSet(FieldPtr field, std::vector<u64> sorted_unique);

    FieldPtr field_;
    std::vector<u64> elems_;
    std::vector<u64> bits_;
};

// Support sets A+B / A-B and S*T = {s*t}.
FpSet pointwise_sum(const FpSet& a, const FpSet& b, Sign sign);
FpSet pointwise_product(const FpSet& s, const FpSet& t);

} // namespace spl
