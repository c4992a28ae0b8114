#include "transform.hpp"

#include <algorithm>
#include <bit>

namespace spl {

namespace detail {

namespace {

constexpr NttPrime kPrimes[] = {
    {3221225473ull, 5},  // 3 * 2^30 + 1
    {3489660929ull, 3},  // 13 * 2^28 + 1
    {2281701377ull, 3},  // 17 * 2^27 + 1
    {2013265921ull, 31}, // 15 * 2^27 + 1
    {3892314113ull, 3},  // 29 * 2^27 + 1
};

// In-place iterative radix-2 NTT. size(a) is a power of two dividing q-1.
void ntt(std::vector<u64>& a, u64 q, u64 g, bool invert) {
    const size_t n = a.size();
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        u64 w = mod_pow(g, (q - 1) / len, q);
        if (invert) w = mod_pow(w, q - 2, q);
        for (size_t i = 0; i < n; i += len) {
            u64 wn = 1;
            for (size_t j = 0; j < len / 2; ++j) {
                u64 u = a[i + j];
                u64 v = a[i + j + len / 2] * wn % q; // operands < q < 2^32
                a[i + j] = u + v >= q ? u + v - q : u + v;
                a[i + j + len / 2] = u >= v ? u - v : u + q - v;
                wn = wn * w % q;
            }
        }
    }
    if (invert) {
        u64 n_inv = mod_pow(n % q, q - 2, q);
        for (auto& x : a) x = x * n_inv % q;
    }
}

// Linear convolution of the residues of f and h modulo q, truncated to
// f.size() + h.size() - 1 entries.
std::vector<u64> conv_mod(const std::vector<u128>& f, const std::vector<u128>& h, const NttPrime& prime) {
    const size_t out_len = f.size() + h.size() - 1;
    const size_t n = std::bit_ceil(out_len);
    std::vector<u64> fa(n, 0), ha(n, 0);
    for (size_t i = 0; i < f.size(); ++i) fa[i] = u64(f[i] % prime.q);
    for (size_t i = 0; i < h.size(); ++i) ha[i] = u64(h[i] % prime.q);
    ntt(fa, prime.q, prime.g, false);
    ntt(ha, prime.q, prime.g, false);
    for (size_t i = 0; i < n; ++i) fa[i] = fa[i] * ha[i] % prime.q;
    ntt(fa, prime.q, prime.g, true);
    fa.resize(out_len);
    return fa;
}

struct Extents {
    u128 total = 0;
    u128 max = 0;
    u64 support = 0;
};

Extents scan(const std::vector<u128>& v) {
    Extents e;
    for (u128 x : v) {
        if (x == 0) continue;
        e.total = checked_add(e.total, x);
        e.max = std::max(e.max, x);
        ++e.support;
    }
    return e;
}

std::vector<size_t> support_indices(const std::vector<u128>& v) {
    std::vector<size_t> nz;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) nz.push_back(i);
    return nz;
}

std::vector<u128> sparse_cyclic_conv(const std::vector<u128>& f, const std::vector<u128>& h) {
    const size_t period = f.size();
    const auto nf = support_indices(f);
    const auto nh = support_indices(h);
    std::vector<u128> out(period, 0);
    for (size_t i : nf) {
        const u128 fi = f[i];
        for (size_t j : nh) {
            size_t k = i + j;
            if (k >= period) k -= period;
            out[k] += fi * h[j];
        }
    }
    return out;
}

} // namespace

std::span<const NttPrime> ntt_primes() { return kPrimes; }

std::vector<u128> exact_cyclic_convolution(const std::vector<u128>& f, const std::vector<u128>& h,
                                           ConvMode mode) {
    if (f.size() != h.size() || f.empty())
        fail(Errc::invalid_argument, "cyclic convolution needs equal nonzero lengths");
    const size_t period = f.size();

    const Extents ef = scan(f);
    const Extents eh = scan(h);
    if (ef.total == 0 || eh.total == 0) return std::vector<u128>(period, 0);

    // Certified bound on any output entry; every partial sum stays below it.
    const u128 bound = std::min(saturating_mul(ef.total, eh.max), saturating_mul(eh.total, ef.max));
    if (bound > count_limit())
        fail(Errc::overflow_guard, "certified convolution bound exceeds 2^127");

    const bool naive = mode == ConvMode::force_naive ||
                       (mode == ConvMode::automatic && std::min(ef.support, eh.support) < naive_cutover);
    if (naive) return ef.support <= eh.support ? sparse_cyclic_conv(f, h) : sparse_cyclic_conv(h, f);

    // Enough primes that the CRT modulus exceeds the bound.
    std::vector<NttPrime> chosen;
    u128 modulus = 1;
    for (const auto& prime : kPrimes) {
        chosen.push_back(prime);
        if (modulus > bound / prime.q) { modulus = bound + 1; break; } // product already past bound
        modulus *= prime.q;
        if (modulus > bound) break;
    }
    if (modulus <= bound) fail(Errc::overflow_guard, "CRT prime pool exhausted");

    std::vector<std::vector<u64>> residues;
    residues.reserve(chosen.size());
    for (const auto& prime : chosen) residues.push_back(conv_mod(f, h, prime));

    // Garner mixed-radix reconstruction; digits and partial sums never exceed
    // the certified bound, so 128-bit accumulation is exact.
    const size_t k = chosen.size();
    std::vector<u64> prefix_inv(k, 0); // inverse of q_0*...*q_{i-1} mod q_i
    for (size_t i = 1; i < k; ++i) {
        u64 prod = 1;
        for (size_t j = 0; j < i; ++j) prod = mod_mul(prod, chosen[j].q % chosen[i].q, chosen[i].q);
        prefix_inv[i] = mod_inverse(prod, chosen[i].q);
    }

    const size_t lin_len = 2 * period - 1;
    std::vector<u128> lin(lin_len);
    for (size_t idx = 0; idx < lin_len; ++idx) {
        u128 x = residues[0][idx];
        u128 prefix = chosen[0].q;
        for (size_t i = 1; i < k; ++i) {
            const u64 qi = chosen[i].q;
            const u64 cur = u64(x % qi);
            const u64 ri = residues[i][idx];
            const u64 diff = ri >= cur ? ri - cur : ri + qi - cur;
            x += u128(mod_mul(diff, prefix_inv[i], qi)) * prefix;
            if (i + 1 < k) prefix *= qi;
        }
        lin[idx] = x;
    }

    std::vector<u128> out(period, 0);
    for (size_t i = 0; i < lin_len; ++i) out[i % period] += lin[i];
    return out;
}

} // namespace detail

RepFn::RepFn(FieldPtr field, Domain domain) : field_(std::move(field)), domain_(domain), total_(0) {
    values_.assign(domain_ == Domain::additive ? field_->p() : field_->p() - 1, 0);
}

RepFn::RepFn(FieldPtr field, Domain domain, std::vector<u128> values)
    : field_(std::move(field)), domain_(domain), values_(std::move(values)) {
    const u64 expect = domain_ == Domain::additive ? field_->p() : field_->p() - 1;
    if (values_.size() != expect)
        fail(Errc::invalid_argument, "representation function has wrong length");
    total_ = 0;
    for (u128 v : values_) total_ = checked_add(total_, v);
}

u128 RepFn::max_value() const {
    u128 m = 0;
    for (u128 v : values_) m = std::max(m, v);
    return m;
}

u64 RepFn::support_size() const {
    u64 n = 0;
    for (u128 v : values_)
        if (v != 0) ++n;
    return n;
}

RepFn RepFn::restrict_nonzero() const {
    if (domain_ != Domain::additive)
        fail(Errc::invalid_argument, "restrict_nonzero expects an additive-domain function");
    std::vector<u128> v = values_;
    v[0] = 0;
    return RepFn(field_, Domain::additive, std::move(v));
}

RepFn RepFn::to_multiplicative() const {
    if (domain_ != Domain::additive)
        fail(Errc::invalid_argument, "function already in the multiplicative domain");
    const u64 p = field_->p();
    std::vector<u128> v(p - 1);
    for (u64 k = 0; k < p - 1; ++k) v[k] = values_[field_->exp(k)];
    return RepFn(field_, Domain::multiplicative, std::move(v));
}

RepFn RepFn::to_additive() const {
    if (domain_ != Domain::multiplicative)
        fail(Errc::invalid_argument, "function already in the additive domain");
    const u64 p = field_->p();
    std::vector<u128> v(p, 0);
    for (u64 k = 0; k < p - 1; ++k) v[field_->exp(k)] = values_[k];
    return RepFn(field_, Domain::additive, std::move(v));
}

namespace {

void require_same_field(const RepFn& f, const RepFn& h) {
    if (f.field().p() != h.field().p())
        fail(Errc::field_mismatch, "representation functions over different fields");
}

RepFn additive_rep_impl(const FpSet& a, const FpSet& b, Sign sign, detail::ConvMode mode) {
    if (a.field().p() != b.field().p()) fail(Errc::field_mismatch, "sets over different fields");
    const auto& field = a.field();
    const u64 p = field.p();

    const bool naive = mode == detail::ConvMode::force_naive ||
                       (mode == detail::ConvMode::automatic &&
                        std::min(a.size(), b.size()) < detail::naive_cutover);
    if (naive) {
        std::vector<u128> r(p, 0);
        for (u64 x : a.elements())
            for (u64 y : b.elements())
                ++r[sign == Sign::plus ? field.add(x, y) : field.sub(x, y)];
        return RepFn(a.field_ptr(), Domain::additive, std::move(r));
    }

    std::vector<u128> fa(p, 0), fb(p, 0);
    for (u64 x : a.elements()) fa[x] = 1;
    for (u64 y : b.elements()) fb[sign == Sign::plus ? y : field.neg(y)] = 1;
    auto conv = detail::exact_cyclic_convolution(fa, fb, detail::ConvMode::force_transform);
    return RepFn(a.field_ptr(), Domain::additive, std::move(conv));
}

// Multiplicative-domain arrays for the nonzero part of an additive-domain function.
std::vector<u128> dlog_coords(const RepFn& f) {
    const auto& field = f.field();
    const u64 p = field.p();
    std::vector<u128> coords(p - 1);
    for (u64 k = 0; k < p - 1; ++k) coords[k] = f.at(field.exp(k));
    return coords;
}

RepFn mult_convolution_impl(const RepFn& f, const RepFn& h, detail::ConvMode mode) {
    require_same_field(f, h);
    if (f.domain() != Domain::additive || h.domain() != Domain::additive)
        fail(Errc::invalid_argument, "mult_convolution expects additive-domain inputs");
    const auto& field = f.field();
    const u64 p = field.p();

    auto conv = detail::exact_cyclic_convolution(dlog_coords(f), dlog_coords(h), mode);
    std::vector<u128> out(p, 0);
    for (u64 k = 0; k < p - 1; ++k) out[field.exp(k)] = conv[k];
    return RepFn(f.field_ptr(), Domain::additive, std::move(out));
}

std::vector<u128> mult_autocorrelation_impl(const RepFn& f, detail::ConvMode mode) {
    if (f.domain() != Domain::additive)
        fail(Errc::invalid_argument, "mult_autocorrelation expects an additive-domain input");
    const auto& field = f.field();
    const u64 p = field.p();
    const u64 period = p - 1;

    auto coords = dlog_coords(f);
    std::vector<u128> reversed(period);
    for (u64 k = 0; k < period; ++k) reversed[k] = coords[(period - k) % period];
    auto conv = detail::exact_cyclic_convolution(coords, reversed, mode);

    std::vector<u128> ac(period);
    for (u64 xi = 1; xi < p; ++xi) ac[xi - 1] = conv[field.dlog(xi)];
    return ac;
}

} // namespace

RepFn additive_rep(const FpSet& a, const FpSet& b, Sign sign) {
    return additive_rep_impl(a, b, sign, detail::ConvMode::automatic);
}

RepFn naive_additive_rep(const FpSet& a, const FpSet& b, Sign sign) {
    return additive_rep_impl(a, b, sign, detail::ConvMode::force_naive);
}

RepFn mult_convolution(const RepFn& f, const RepFn& h) {
    return mult_convolution_impl(f, h, detail::ConvMode::automatic);
}

RepFn naive_mult_convolution(const RepFn& f, const RepFn& h) {
    return mult_convolution_impl(f, h, detail::ConvMode::force_naive);
}

std::vector<u128> mult_autocorrelation(const RepFn& f) {
    return mult_autocorrelation_impl(f, detail::ConvMode::automatic);
}

std::vector<u128> naive_mult_autocorrelation(const RepFn& f) {
    const auto& field = f.field();
    const u64 p = field.p();
    std::vector<u128> ac(p - 1, 0);
    std::vector<u64> support;
    for (u64 t = 1; t < p; ++t)
        if (f.at(t) != 0) support.push_back(t);
    for (u64 xi = 1; xi < p; ++xi) {
        const u64 xi_inv = field.inv(xi);
        u128 sum = 0;
        for (u64 t : support) sum += f.at(t) * f.at(field.mul(t, xi_inv));
        ac[xi - 1] = sum;
    }
    return ac;
}

} // namespace spl
