#include "energy.hpp"

#include <algorithm>
#include <cmath>

namespace spl {

namespace {

u128 sum_of_squares(const RepFn& r) {
    u128 sum = 0;
    for (u128 v : r.values())
        if (v != 0) sum = checked_add(sum, checked_mul(v, v));
    return sum;
}

void require_nonzero_dilates(const FpSet& x) {
    if (x.contains(0)) fail(Errc::zero_in_set, "dilate set contains 0");
}

} // namespace

EnergySpectrum::EnergySpectrum(FieldPtr field, u64 set_size, std::vector<u128> values)
    : field_(std::move(field)), set_size_(set_size), values_(std::move(values)) {
    if (values_.size() != field_->p() - 1)
        fail(Errc::invalid_argument, "spectrum must cover all of F_p^*");
}

BigInt EnergySpectrum::sum() const {
    BigInt s = 0;
    for (u128 v : values_) s += to_bigint(v);
    return s;
}

u128 EnergySpectrum::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

u128 EnergySpectrum::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

Rational EnergySpectrum::mean_floor() const {
    BigInt n(set_size_);
    return Rational(n * n * n * n, BigInt(field_->p()));
}

u128 additive_energy(const FpSet& a, u64 xi) {
    if (xi == 0 || xi >= a.field().p()) fail(Errc::zero_dilation, "energy needs xi in F_p^*");
    return sum_of_squares(additive_rep(a, a.dilate(xi), Sign::minus));
}

EnergySpectrum energy_spectrum(const FpSet& a) {
    if (a.empty()) fail(Errc::empty_set, "energy spectrum of the empty set");
    const u64 p = a.field().p();
    const u128 diag = u128(a.size()) * a.size();

    auto r = additive_rep(a, a, Sign::minus).restrict_nonzero();
    auto ac = mult_autocorrelation(r);
    std::vector<u128> values(p - 1);
    for (u64 xi = 1; xi < p; ++xi) values[xi - 1] = checked_add(diag, ac[xi - 1]);
    return EnergySpectrum(a.field_ptr(), a.size(), std::move(values));
}

BktCheck bkt_check(const EnergySpectrum& spectrum) {
    const BigInt n(spectrum.set_size());
    const BigInt p(spectrum.field().p());
    BktCheck out;
    out.lhs = spectrum.sum();
    out.rhs = n * n * n * n + p * n * n - 2 * n * n * n;
    out.equal = out.lhs == out.rhs;
    return out;
}

BktCheck bkt_check(const FpSet& a) { return bkt_check(energy_spectrum(a)); }

BktCorollary bkt_corollary_check(const EnergySpectrum& spectrum, const FpSet& s) {
    if (s.contains(0)) fail(Errc::zero_in_set, "corollary sum ranges over nonzero xi");
    const BigInt p(spectrum.field().p());
    const BigInt n(spectrum.set_size());
    const BigInt n4 = n * n * n * n;

    BigInt sum;
    for (u64 xi : s.elements()) sum += to_bigint(spectrum.at(xi));
    BktCorollary out;
    // sum over S of (E - n^4/p) = (p*sum - |S|*n^4) / p
    out.lhs = Rational(p * sum - BigInt(s.size()) * n4, p);
    out.bound = p * n * n;
    out.holds = out.lhs <= Rational(out.bound);
    return out;
}

BktCorollary bkt_corollary_full(const EnergySpectrum& spectrum) {
    const BigInt p(spectrum.field().p());
    const BigInt n(spectrum.set_size());
    const BigInt n4 = n * n * n * n;
    BktCorollary out;
    out.lhs = Rational(p * spectrum.sum() - (p - 1) * n4, p);
    out.bound = p * n * n;
    out.holds = out.lhs <= Rational(out.bound);
    return out;
}

CensusReport dyadic_census(const EnergySpectrum& spectrum, const Rational& k_threshold) {
    if (k_threshold < 1) fail(Errc::bad_parameter, "census threshold K must be at least 1");
    const BigInt n(spectrum.set_size());
    const BigInt n3 = n * n * n;
    const BigInt k_num = boost::multiprecision::numerator(k_threshold);
    const BigInt k_den = boost::multiprecision::denominator(k_threshold);

    CensusReport report;
    report.threshold_k = k_threshold;

    int k = 0;
    while (Rational(BigInt(1) << k) < k_threshold) ++k; // 2^{k-1} < K <= 2^k
    report.bucket_count = k;
    report.bucket_sizes.assign(size_t(k), 0);
    report.below_all_buckets = 0;
    report.over_threshold_count = 0;

    for (u128 e128 : spectrum.values()) {
        const BigInt e = to_bigint(e128);
        // E > |A|^3 / K  <=>  E * K_num * ... cross-multiplied exactly
        if (e * k_num > n3 * k_den) ++report.over_threshold_count;
        bool placed = false;
        for (int i = 1; i <= k; ++i) {
            // |A|^3/2^i < E <= |A|^3/2^{i-1}
            if ((e << i) > n3 && (e << (i - 1)) <= n3) {
                ++report.bucket_sizes[size_t(i - 1)];
                placed = true;
                break;
            }
        }
        if (!placed && (e << k) <= n3) ++report.below_all_buckets;
    }

    const BigInt p(spectrum.field().p());
    report.k_le_p_over_n = k_num * n <= p * k_den;
    report.k_le_sqrt_n = k_num * k_num <= n * k_den * k_den;
    return report;
}

CensusReport dyadic_census(const FpSet& a, const Rational& k_threshold) {
    return dyadic_census(energy_spectrum(a), k_threshold);
}

SumBoundReport rudnev_lhs_rhs(const FpSet& a, const FpSet& x) {
    if (a.empty()) fail(Errc::empty_set, "energy sum over an empty set");
    require_nonzero_dilates(x);
    const auto spectrum = energy_spectrum(a);

    SumBoundReport out;
    for (u64 xi : x.elements()) out.lhs += to_bigint(spectrum.at(xi));

    const double na = double(a.size());
    const double nx = double(x.size());
    const double e_a = double(to_bigint(spectrum.at(1)).convert_to<double>()); // E_+(A)
    out.bound_a = std::sqrt(e_a) * (std::pow(na, 1.5) * std::pow(nx, 0.75) + na * nx);
    out.bound_b = std::pow(na, 3.0) * std::pow(nx, 0.75) + std::pow(na, 2.5) * nx;
    const double lhs_d = out.lhs.convert_to<double>();
    out.ratio_a = out.bound_a > 0 ? lhs_d / out.bound_a : 0;
    out.ratio_b = out.bound_b > 0 ? lhs_d / out.bound_b : 0;
    const double p = double(a.field().p());
    out.precondition_ratio = na * na * nx / (p * p);
    return out;
}

SumBoundReport murphy_lhs_rhs(const FpSet& a, const FpSet& x) {
    if (a.empty()) fail(Errc::empty_set, "energy sum over an empty set");

    SumBoundReport out;
    for (u64 xv : x.elements()) out.lhs += to_bigint(mult_energy(a, xv));

    const double na = double(a.size());
    const double nx = double(x.size());
    const double e_a = double(to_bigint(mult_energy(a, 0)).convert_to<double>()); // E_x(A)
    out.bound_a = std::sqrt(e_a) * (std::pow(na, 1.5) * std::pow(nx, 0.75) + na * nx);
    out.bound_b = std::pow(na, 3.0) * std::pow(nx, 0.75) + std::pow(na, 2.5) * nx;
    const double lhs_d = out.lhs.convert_to<double>();
    out.ratio_a = out.bound_a > 0 ? lhs_d / out.bound_a : 0;
    out.ratio_b = out.bound_b > 0 ? lhs_d / out.bound_b : 0;
    const double p = double(a.field().p());
    out.precondition_ratio = na * na * nx / (p * p);
    return out;
}

LineCountReport line_solution_count(const FpSet& a, const FpSet& x) {
    require_nonzero_dilates(x);
    const auto field = a.field_ptr();
    const u64 p = field->p();

    // Both sides zero forces a1 = a2 and a3 = a4: |X|^2 |A|^2 solutions.
    LineCountReport out;
    out.count = checked_mul(checked_mul(u128(x.size()), x.size()),
                            checked_mul(u128(a.size()), a.size()));

    if (a.size() > 1 && !x.empty()) {
        std::vector<u128> xi(p, 0);
        for (u64 xv : x.elements()) xi[xv] = 1;
        auto diff = additive_rep(a, a, Sign::minus).restrict_nonzero();
        auto scaled = mult_convolution(RepFn(field, Domain::additive, std::move(xi)), diff);
        out.count = checked_add(out.count, sum_of_squares(scaled));
    }

    const double na = double(a.size());
    const double nx = double(x.size());
    out.comparison_bound = std::pow(na, 3.0) * std::pow(nx, 1.5) + na * na * nx * nx;
    if (out.comparison_bound > 0)
        out.ratio = to_bigint(out.count).convert_to<double>() / out.comparison_bound;
    return out;
}

u128 mult_energy(const FpSet& a, u64 x) {
    const auto field = a.field_ptr();
    const u64 p = field->p();
    if (x >= p) fail(Errc::bad_parameter, "translate outside the field");
    if (a.empty()) return 0;
    const FpSet b = a.affine_image(1, x);

    // r(0) = |A|[0 in B] + |B|[0 in A] - [both]
    u128 r0 = 0;
    if (b.contains(0)) r0 += a.size();
    if (a.contains(0)) r0 += b.size();
    if (a.contains(0) && b.contains(0)) r0 -= 1;

    u128 energy = checked_mul(r0, r0);
    std::vector<u128> fa(p, 0), fb(p, 0);
    u64 nz_a = 0, nz_b = 0;
    for (u64 v : a.elements())
        if (v != 0) { fa[v] = 1; ++nz_a; }
    for (u64 v : b.elements())
        if (v != 0) { fb[v] = 1; ++nz_b; }
    if (nz_a > 0 && nz_b > 0) {
        auto prod = mult_convolution(RepFn(field, Domain::additive, std::move(fa)),
                                     RepFn(field, Domain::additive, std::move(fb)));
        energy = checked_add(energy, sum_of_squares(prod));
    }
    return energy;
}

} // namespace spl
