#include "field.hpp"

namespace spl {

u64 mod_mul(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 mod_pow(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mod_mul(result, base, m);
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    return result;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = mod_pow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mod_mul(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

u64 mod_inverse(u64 a, u64 p) {
    if (a == 0) fail(Errc::zero_inverse, "inverse of zero");
    return mod_pow(a % p, p - 2, p);
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> factors;
    for (u64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            factors.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) factors.push_back(n);
    return factors;
}

u64 smallest_primitive_root(u64 p) {
    if (!is_prime(p)) fail(Errc::not_prime, "primitive root of non-prime " + std::to_string(p));
    const auto factors = prime_factors(p - 1);
    for (u64 g = 1; g < p; ++g) {
        bool ok = true;
        for (u64 q : factors) {
            if (mod_pow(g, (p - 1) / q, p) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    fail(Errc::internal, "no primitive root found"); // unreachable for prime p
}

PrimeField::PrimeField(u64 p, u64 table_cap) : p_(p) {
    if (!is_prime(p)) fail(Errc::not_prime, std::to_string(p) + " is not prime");
    if (table_cap > (u64(1) << 32)) table_cap = u64(1) << 32; // 32-bit table entries
    if (p > table_cap)
        fail(Errc::too_large, "p = " + std::to_string(p) + " exceeds table cap " + std::to_string(table_cap));
    g_ = smallest_primitive_root(p);
    exp_.resize(p - 1);
    dlog_.assign(p, 0);
    u64 x = 1;
    for (u64 k = 0; k < p - 1; ++k) {
        exp_[k] = u32(x);
        dlog_[x] = u32(k);
        x = mod_mul(x, g_, p);
    }
}

u64 PrimeField::dlog(u64 x) const {
    if (x == 0 || x >= p_) fail(Errc::bad_parameter, "dlog argument outside F_p^*");
    return dlog_[x];
}

FieldPtr make_field(u64 p, u64 table_cap) { return std::make_shared<PrimeField>(p, table_cap); }

} // namespace spl
