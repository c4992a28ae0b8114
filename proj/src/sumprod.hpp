#pragma once

#include <optional>

#include "energy.hpp"

namespace spl {

struct Signs {
    Sign first = Sign::minus;
    Sign second = Sign::minus;
};

enum class CountMethod { brute, repfn, transform };

// Quadruple budget for the brute-force route.
inline constexpr u128 brute_budget = 10'000'000;

// r(x) = #{(a,b,c,d) : (a +- b)(c +- d) = x}. Fast path: two additive reps,
// one multiplicative convolution of their nonzero parts, and the exact zero
// mass |A||B||C||D| - total(u')total(v').
RepFn diff_product_rep(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d, Signs signs);

u64 support_size(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d, Signs signs);

struct SolutionCountRecord {
    u128 n_total = 0;
    u128 n_zero = 0;
    u128 n_nonzero = 0;
    CountMethod method = CountMethod::transform;
    Rational main_term; // (|A||B||C||D|)^2 / p
    u64 support_size = 0;
};

// N = sum of r(x)^2 by one of three independent routes; all must agree.
SolutionCountRecord solution_count(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d,
                                   Signs signs, CountMethod method);

// (1/(p-1)) sum over multiplicative chi of |sum_{a,a'} chi(a - a')|^4, exact,
// via the correlation route in dlog coordinates; equals n_nonzero of
// solution_count(A,A,A,A,(-,-)).
u128 char_fourth_moment(const FpSet& a);

// True iff b = c + lambda*a for some lambda != 0, c.
bool is_affine_image(const FpSet& a, const FpSet& b);

struct AddEnCheck {
    u128 n_nonzero = 0;
    BigInt energy_sum;  // sum over xi != 0 of E_+(A, xi A)^2
    bool holds = false; // n_nonzero <= energy_sum
    u128 zero_term = 0;
    double zero_term_ratio = 0; // zero_term / |A|^6
};

AddEnCheck adden_check(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d);

struct Exi2Check {
    Rational lhs_deviation_sum; // sum (E - |A|^4/p)^2
    Rational rhs_exact;         // sum E^2 - |A|^8/p - 2|A|^6 + 4|A|^7/p - |A|^8/p^2
    bool identity_holds = false;
    bool lemma_bound_holds = false;
};

Exi2Check exi2_check(const EnergySpectrum& spectrum);
Exi2Check exi2_check(const FpSet& a);

struct DyadicSplitReport {
    Rational threshold_k;    // K, default ceil((p/|A|)^{1/3})
    Rational very_small_sum; // over {E <= |A|^{5/2}}
    Rational small_sum;      // over {E <= |A|^3 / K}
    Rational large_sum;      // over {E > |A|^3 / K}
    double term_vsmall = 0;  // p |A|^{9/2}
    double term_small = 0;   // p |A|^5 / K
    double term_large = 0;   // K^2 |A|^6
    double ratio_vsmall = 0;
    double ratio_small = 0;
    double ratio_large = 0;
};

DyadicSplitReport proposition_split(const FpSet& a, std::optional<Rational> k_threshold = {});

struct CoverageReport {
    u64 support_size = 0;
    u128 n_total = 0;
    Rational cs_bound; // (|A||B||C||D|)^2 / N
    bool above_half_p = false;
};

CoverageReport coverage_lower_bound(const FpSet& a, const FpSet& b, const FpSet& c, const FpSet& d,
                                    Signs signs);

} // namespace spl
