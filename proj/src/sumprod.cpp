#include "sumprod.hpp"

#include <algorithm>
#include <cmath>

namespace spl {

namespace {

void require_quad(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d) {
    const u64 p = a.field().p();
    if (b.field().p() != p || c.field().p() != p || d.field().p() != p)
        fail(Errc::field_mismatch, "sets over different fields");
    if (a.empty() || b.empty() || c.empty() || d.empty())
        fail(Errc::empty_set, "product-of-differences needs nonempty sets");
}

u128 quad_mass(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d) {
    return checked_mul(checked_mul(u128(a.size()), b.size()),
                       checked_mul(u128(c.size()), d.size()));
}

u128 sum_of_squares(const std::vector<u128>& values) {
    u128 sum = 0;
    for (u128 v : values)
        if (v != 0) sum = checked_add(sum, checked_mul(v, v));
    return sum;
}

SolutionCountRecord finish_record(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d,
                                  CountMethod method, const std::vector<u128>& r) {
    SolutionCountRecord rec;
    rec.method = method;
    rec.n_zero = checked_mul(r[0], r[0]);
    for (size_t i = 1; i < r.size(); ++i)
        if (r[i] != 0) rec.n_nonzero = checked_add(rec.n_nonzero, checked_mul(r[i], r[i]));
    rec.n_total = checked_add(rec.n_zero, rec.n_nonzero);
    const BigInt mass = to_bigint(quad_mass(a, b, c, d));
    rec.main_term = Rational(mass * mass, BigInt(a.field().p()));
    rec.support_size = 0;
    for (u128 v : r)
        if (v != 0) ++rec.support_size;
    return rec;
}

std::vector<u128> brute_rep(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d,
                            Signs signs) {
    if (quad_mass(a, b, c, d) > brute_budget)
        fail(Errc::budget_exceeded, "brute-force route over the 10^7 quadruple budget");
    const auto& f = a.field();
    const u64 p = f.p();
    std::vector<u128> r(p, 0);
    std::vector<u64> left, right;
    for (u64 av : a.elements())
        for (u64 bv : b.elements())
            left.push_back(signs.first == Sign::plus ? f.add(av, bv) : f.sub(av, bv));
    for (u64 cv : c.elements())
        for (u64 dv : d.elements())
            right.push_back(signs.second == Sign::plus ? f.add(cv, dv) : f.sub(cv, dv));
    for (u64 u : left)
        for (u64 v : right) ++r[f.mul(u, v)];
    return r;
}

// Rep-function route with quadratic building blocks only.
std::vector<u128> repfn_rep(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d,
                            Signs signs) {
    auto u = naive_additive_rep(a, b, signs.first);
    auto v = naive_additive_rep(c, d, signs.second);
    auto w = naive_mult_convolution(u.restrict_nonzero(), v.restrict_nonzero());
    std::vector<u128> r = w.values();
    r[0] = quad_mass(a, b, c, d) - checked_mul(u.total() - u.at(0), v.total() - v.at(0));
    return r;
}

} // namespace

RepFn diff_product_rep(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d, Signs signs) {
    require_quad(a, b, c, d);
    auto u = additive_rep(a, b, signs.first);
    auto v = additive_rep(c, d, signs.second);
    auto u_nz = u.restrict_nonzero();
    auto v_nz = v.restrict_nonzero();
    auto w = mult_convolution(u_nz, v_nz);
    std::vector<u128> r = w.values();
    r[0] = quad_mass(a, b, c, d) - checked_mul(u_nz.total(), v_nz.total());
    return RepFn(a.field_ptr(), Domain::additive, std::move(r));
}

u64 support_size(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d, Signs signs) {
    return diff_product_rep(a, b, c, d, signs).support_size();
}

SolutionCountRecord solution_count(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d,
                                   Signs signs, CountMethod method) {
    require_quad(a, b, c, d);
    switch (method) {
    case CountMethod::brute:
        return finish_record(a, b, c, d, method, brute_rep(a, b, c, d, signs));
    case CountMethod::repfn:
        return finish_record(a, b, c, d, method, repfn_rep(a, b, c, d, signs));
    case CountMethod::transform:
        return finish_record(a, b, c, d, method, diff_product_rep(a, b, c, d, signs).values());
    }
    fail(Errc::invalid_argument, "unknown counting method");
}

u128 char_fourth_moment(const FpSet& a) {
    if (a.empty()) fail(Errc::empty_set, "character moment of the empty set");
    if (a.size() == 1) return 0; // all differences vanish, chi(0) = 0
    auto r = additive_rep(a, a, Sign::minus).restrict_nonzero();
    auto ac = mult_autocorrelation(r);
    return sum_of_squares(ac);
}

bool is_affine_image(const FpSet& a, const FpSet& b) {
    if (a.field().p() != b.field().p()) return false;
    if (a.size() != b.size()) return false;
    const u64 n = a.size();
    if (n <= 1) return true;
    const auto& f = a.field();
    const u64 p = f.p();
    if (n == p) return true;

    auto moments = [&f](const FpSet& s) {
        u64 m1 = 0, m2 = 0;
        for (u64 v : s.elements()) {
            m1 = f.add(m1, v);
            m2 = f.add(m2, f.mul(v, v));
        }
        return std::pair<u64, u64>{m1, m2};
    };
    const auto [s1, s2] = moments(a);
    const auto [t1, t2] = moments(b);
    const u64 n_mod = n % p; // nonzero since 1 < n < p

    auto matches = [&](u64 lambda, u64 c) {
        for (u64 v : a.elements())
            if (!b.contains(f.add(c, f.mul(lambda, v)))) return false;
        return true;
    };

    // n*S2 - S1^2 transforms by lambda^2 under affine maps; when nonzero it
    // pins lambda up to sign.
    const u64 alpha = f.sub(f.mul(n_mod, s2), f.mul(s1, s1));
    const u64 beta = f.sub(f.mul(n_mod, t2), f.mul(t1, t1));
    if (alpha != 0) {
        if (beta == 0) return false;
        const u64 lambda_sq = f.mul(beta, f.inv(alpha));
        const u64 d = f.dlog(lambda_sq);
        if (d % 2 != 0) return false;
        const u64 root = f.exp(d / 2);
        const u64 n_inv = f.inv(n_mod);
        for (u64 lambda : {root, f.neg(root)}) {
            const u64 c = f.mul(f.sub(t1, f.mul(lambda, s1)), n_inv);
            if (matches(lambda, c)) return true;
        }
        return false;
    }

    // Degenerate second moment: fall back to candidate pairs mapping the two
    // smallest elements of A onto ordered pairs of B.
    if (beta != 0) return false;
    const u64 a0 = a.elements()[0];
    const u64 a1 = a.elements()[1];
    const u64 inv_gap = f.inv(f.sub(a1, a0));
    for (u64 b0 : b.elements()) {
        for (u64 b1 : b.elements()) {
            if (b0 == b1) continue;
            const u64 lambda = f.mul(f.sub(b1, b0), inv_gap);
            const u64 c = f.sub(b0, f.mul(lambda, a0));
            if (matches(lambda, c)) return true;
        }
    }
    return false;
}

AddEnCheck adden_check(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d) {
    require_quad(a, b, c, d);
    for (const FpSet* s : {&b, &c, &d})
        if (!is_affine_image(a, *s))
            fail(Errc::not_affine_image, "B, C, D must be affine images of A");

    const auto rec = solution_count(a, b, c, d, Signs{Sign::minus, Sign::minus}, CountMethod::transform);
    const auto spectrum = energy_spectrum(a);

    AddEnCheck out;
    out.n_nonzero = rec.n_nonzero;
    for (u128 e : spectrum.values()) {
        const BigInt be = to_bigint(e);
        out.energy_sum += be * be;
    }
    out.holds = to_bigint(rec.n_nonzero) <= out.energy_sum;
    out.zero_term = rec.n_zero;
    const BigInt n(a.size());
    out.zero_term_ratio =
        (Rational(to_bigint(rec.n_zero), n * n * n * n * n * n)).convert_to<double>();
    return out;
}

Exi2Check exi2_check(const EnergySpectrum& spectrum) {
    const BigInt p(spectrum.field().p());
    const BigInt n(spectrum.set_size());
    const BigInt n4 = n * n * n * n;
    const BigInt n6 = n4 * n * n;
    const BigInt n7 = n6 * n;
    const BigInt n8 = n7 * n;

    BigInt sum_sq;        // sum E^2
    BigInt dev_sq_scaled; // sum (pE - n^4)^2
    for (u128 e128 : spectrum.values()) {
        const BigInt e = to_bigint(e128);
        sum_sq += e * e;
        const BigInt dev = p * e - n4;
        dev_sq_scaled += dev * dev;
    }

    Exi2Check out;
    out.lhs_deviation_sum = Rational(dev_sq_scaled, p * p);
    out.rhs_exact = Rational(sum_sq) - Rational(n8, p) - Rational(2 * n6) + Rational(4 * n7, p) -
                    Rational(n8, p * p);
    out.identity_holds = out.lhs_deviation_sum == out.rhs_exact;
    // Lemma: sum E^2 <= n^8/p + 2 n^6 + sum (E - n^4/p)^2
    out.lemma_bound_holds =
        Rational(sum_sq) <= Rational(n8, p) + Rational(2 * n6) + out.lhs_deviation_sum;
    return out;
}

Exi2Check exi2_check(const FpSet& a) { return exi2_check(energy_spectrum(a)); }

DyadicSplitReport proposition_split(const FpSet& a, std::optional<Rational> k_threshold) {
    if (a.size() < 2) fail(Errc::bad_parameter, "proposition split needs |A| >= 2");
    const auto spectrum = energy_spectrum(a);
    const BigInt p(a.field().p());
    const BigInt n(a.size());
    const BigInt n3 = n * n * n;
    const BigInt n4 = n3 * n;
    const BigInt n5 = n4 * n;

    Rational k_value;
    if (k_threshold) {
        if (*k_threshold < 1) fail(Errc::bad_parameter, "split threshold K must be at least 1");
        k_value = *k_threshold;
    } else {
        // ceil((p/|A|)^{1/3}): least integer k with k^3 |A| >= p
        BigInt k = 1;
        while (k * k * k * n < p) ++k;
        k_value = Rational(k);
    }
    const BigInt k_num = boost::multiprecision::numerator(k_value);
    const BigInt k_den = boost::multiprecision::denominator(k_value);

    BigInt vsmall_scaled, small_scaled, large_scaled; // sums of (pE - n^4)^2
    for (u128 e128 : spectrum.values()) {
        const BigInt e = to_bigint(e128);
        const BigInt dev = p * e - n4;
        const BigInt dev_sq = dev * dev;
        if (e * e <= n5) vsmall_scaled += dev_sq; // E <= |A|^{5/2}
        if (e * k_num <= n3 * k_den)
            small_scaled += dev_sq; // E <= |A|^3 / K
        else
            large_scaled += dev_sq;
    }

    DyadicSplitReport out;
    out.threshold_k = k_value;
    const BigInt p2 = p * p;
    out.very_small_sum = Rational(vsmall_scaled, p2);
    out.small_sum = Rational(small_scaled, p2);
    out.large_sum = Rational(large_scaled, p2);

    const double pd = p.convert_to<double>();
    const double nd = n.convert_to<double>();
    const double kd = k_value.convert_to<double>();
    out.term_vsmall = pd * std::pow(nd, 4.5);
    out.term_small = pd * std::pow(nd, 5.0) / kd;
    out.term_large = kd * kd * std::pow(nd, 6.0);
    out.ratio_vsmall = out.term_vsmall > 0 ? out.very_small_sum.convert_to<double>() / out.term_vsmall : 0;
    out.ratio_small = out.term_small > 0 ? out.small_sum.convert_to<double>() / out.term_small : 0;
    out.ratio_large = out.term_large > 0 ? out.large_sum.convert_to<double>() / out.term_large : 0;
    return out;
}

CoverageReport coverage_lower_bound(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d,
                                    Signs signs) {
    const auto rec = solution_count(a, b, c, d, signs, CountMethod::transform);
    CoverageReport out;
    out.support_size = rec.support_size;
    out.n_total = rec.n_total;
    const BigInt mass = to_bigint(quad_mass(a, b, c, d));
    out.cs_bound = Rational(mass * mass, to_bigint(rec.n_total));
    out.above_half_p = 2 * out.support_size > a.field().p();
    return out;
}

} // namespace spl
