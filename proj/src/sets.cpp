#include "sets.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "rng.hpp"

namespace spl {

namespace {

void require_same_field(const FpSet& a, const FpSet& b) {
    if (a.field().p() != b.field().p())
        fail(Errc::field_mismatch, "sets live in different prime fields");
}

std::vector<u64> collect_bits(const std::vector<u64>& words, u64 p) {
    std::vector<u64> elems;
    for (u64 w = 0; w < words.size(); ++w) {
        u64 word = words[w];
        while (word) {
            int bit = __builtin_ctzll(word);
            u64 x = (w << 6) + u64(bit);
            if (x < p) elems.push_back(x);
            word &= word - 1;
        }
    }
    return elems;
}

} // namespace

FpSet::FpSet(FieldPtr field, std::vector<u64> sorted_unique)
    : field_(std::move(field)), elems_(std::move(sorted_unique)) {
    bits_.assign((field_->p() + 63) / 64, 0);
    for (u64 x : elems_) bits_[x >> 6] |= u64(1) << (x & 63);
}

FpSet FpSet::from_elements(FieldPtr field, std::span<const u64> elems) {
    const u64 p = field->p();
    std::vector<u64> reduced;
    reduced.reserve(elems.size());
    for (u64 e : elems) reduced.push_back(e % p);
    std::sort(reduced.begin(), reduced.end());
    reduced.erase(std::unique(reduced.begin(), reduced.end()), reduced.end());
    return FpSet(std::move(field), std::move(reduced));
}

FpSet FpSet::random_uniform(FieldPtr field, u64 n, u64 seed) {
    const u64 p = field->p();
    if (n > p) fail(Errc::size_too_large, "random subset larger than the field");
    Xoshiro256ss rng(seed);

    // Draws m indices without replacement via partial Fisher-Yates over [0,p),
    // tracking displaced entries in a hash map.
    auto draw = [&](u64 m) {
        std::unordered_map<u64, u64> moved;
        std::vector<u64> out;
        out.reserve(m);
        for (u64 i = 0; i < m; ++i) {
            u64 j = i + rng.below(p - i);
            auto it_j = moved.find(j);
            u64 vj = (it_j == moved.end()) ? j : it_j->second;
            auto it_i = moved.find(i);
            u64 vi = (it_i == moved.end()) ? i : it_i->second;
            moved[j] = vi;
            out.push_back(vj);
        }
        return out;
    };

    std::vector<u64> elems;
    if (n <= p / 2) {
        elems = draw(n);
    } else {
        std::vector<u64> excluded = draw(p - n);
        std::vector<u64> excl_bits((p + 63) / 64, 0);
        for (u64 x : excluded) excl_bits[x >> 6] |= u64(1) << (x & 63);
        elems.reserve(n);
        for (u64 x = 0; x < p; ++x)
            if (!((excl_bits[x >> 6] >> (x & 63)) & 1)) elems.push_back(x);
    }
    std::sort(elems.begin(), elems.end());
    return FpSet(std::move(field), std::move(elems));
}

FpSet FpSet::interval(FieldPtr field, u64 a0, u64 n) {
    const u64 p = field->p();
    if (n > p) fail(Errc::bad_parameter, "interval longer than the field");
    a0 %= p;
    std::vector<u64> elems;
    elems.reserve(n);
    u64 x = a0;
    for (u64 i = 0; i < n; ++i) {
        elems.push_back(x);
        x = x + 1 == p ? 0 : x + 1;
    }
    std::sort(elems.begin(), elems.end());
    return FpSet(std::move(field), std::move(elems));
}

FpSet FpSet::geometric(FieldPtr field, u64 ratio, u64 a0, u64 n) {
    const u64 p = field->p();
    ratio %= p;
    a0 %= p;
    if (ratio == 0 || a0 == 0) fail(Errc::bad_parameter, "geometric family needs nonzero ratio and start");
    if (n > 0) {
        u64 order = (p - 1) / std::gcd(p - 1, field->dlog(ratio));
        if (order < n)
            fail(Errc::bad_parameter, "ratio order " + std::to_string(order) +
                                          " below requested size " + std::to_string(n));
    }
    std::vector<u64> elems;
    elems.reserve(n);
    u64 x = a0;
    for (u64 i = 0; i < n; ++i) {
        elems.push_back(x);
        x = field->mul(x, ratio);
    }
    std::sort(elems.begin(), elems.end());
    return FpSet(std::move(field), std::move(elems));
}

FpSet FpSet::subgroup(FieldPtr field, u64 d) {
    const u64 p = field->p();
    if (d == 0 || (p - 1) % d != 0)
        fail(Errc::bad_parameter, "subgroup order must divide p-1");
    const u64 step = (p - 1) / d;
    std::vector<u64> elems;
    elems.reserve(d);
    for (u64 k = 0; k < d; ++k) elems.push_back(field->exp(k * step));
    std::sort(elems.begin(), elems.end());
    return FpSet(field, std::move(elems));
}

FpSet FpSet::affine_image(u64 lambda, u64 c) const {
    const u64 p = field_->p();
    lambda %= p;
    c %= p;
    if (lambda == 0) fail(Errc::zero_dilation, "affine image with zero dilation");
    std::vector<u64> elems;
    elems.reserve(elems_.size());
    for (u64 a : elems_) elems.push_back(field_->add(c, field_->mul(lambda, a)));
    std::sort(elems.begin(), elems.end());
    return FpSet(field_, std::move(elems));
}

FpSet pointwise_sum(const FpSet& a, const FpSet& b, Sign sign) {
    require_same_field(a, b);
    const auto& f = a.field();
    const u64 p = f.p();
    std::vector<u64> words((p + 63) / 64, 0);
    for (u64 x : a.elements()) {
        for (u64 y : b.elements()) {
            u64 v = sign == Sign::plus ? f.add(x, y) : f.sub(x, y);
            words[v >> 6] |= u64(1) << (v & 63);
        }
    }
    return FpSet::from_elements(a.field_ptr(), collect_bits(words, p));
}

FpSet pointwise_product(const FpSet& s, const FpSet& t) {
    require_same_field(s, t);
    const auto& f = s.field();
    const u64 p = f.p();
    std::vector<u64> words((p + 63) / 64, 0);
    for (u64 x : s.elements()) {
        for (u64 y : t.elements()) {
            u64 v = f.mul(x, y);
            words[v >> 6] |= u64(1) << (v & 63);
        }
    }
    return FpSet::from_elements(s.field_ptr(), collect_bits(words, p));
}

} // namespace spl
