#pragma once

#include "transform.hpp"

namespace spl {

// The map xi -> E_+(A, xi*A) over all nonzero dilation ratios, exact.
class EnergySpectrum {
  public:
    EnergySpectrum(FieldPtr field, u64 set_size, std::vector<u128> values);

    // xi in [1, p)
    u128 at(u64 xi) const { return values_[xi - 1]; }
    const std::vector<u128>& values() const { return values_; }
    u64 set_size() const { return set_size_; }
    const PrimeField& field() const { return *field_; }
    const FieldPtr& field_ptr() const { return field_; }

    BigInt sum() const;
    u128 min_value() const;
    u128 max_value() const;
    // |A|^4 / p, the mean floor every entry sits on
    Rational mean_floor() const;

  private:
    FieldPtr field_;
    u64 set_size_;
    std::vector<u128> values_; // values_[xi-1] = E_+(A, xi A)
};

// E_+(A, xi A) for a single xi != 0, as sum over x of r_{A - xi A}(x)^2.
u128 additive_energy(const FpSet& a, u64 xi);

// All energies at once: E(xi) = |A|^2 + autocorrelation of r_{A-A} restricted
// to F_p^*, evaluated in dlog coordinates.
EnergySpectrum energy_spectrum(const FpSet& a);

struct BktCheck {
    BigInt lhs;
    BigInt rhs;
    bool equal;
};

// Sum of the spectrum against the closed form |A|^4 + p|A|^2 - 2|A|^3.
BktCheck bkt_check(const EnergySpectrum& spectrum);
BktCheck bkt_check(const FpSet& a);

struct BktCorollary {
    Rational lhs; // sum over S of (E - |A|^4/p), exact
    BigInt bound; // p |A|^2
    bool holds;
};

BktCorollary bkt_corollary_check(const EnergySpectrum& spectrum, const FpSet& s);
// Same with S = all of F_p^*.
BktCorollary bkt_corollary_full(const EnergySpectrum& spectrum);

struct CensusReport {
    Rational threshold_k;           // K
    int bucket_count;               // k with 2^{k-1} < K <= 2^k
    std::vector<u64> bucket_sizes;  // |X_i|, X_i = {xi : |A|^3/2^i < E <= |A|^3/2^{i-1}}
    u64 below_all_buckets;          // #{xi : E <= |A|^3 / 2^k}
    u64 over_threshold_count;       // #{xi : E > |A|^3 / K}
    bool k_le_p_over_n;             // K <= p/|A|
    bool k_le_sqrt_n;               // K <= |A|^{1/2}
};

// Dyadic census of the spectrum; all threshold comparisons are exact.
CensusReport dyadic_census(const EnergySpectrum& spectrum, const Rational& k_threshold);
CensusReport dyadic_census(const FpSet& a, const Rational& k_threshold);

struct SumBoundReport {
    BigInt lhs;
    double bound_a = 0; // E^{1/2}(|A|^{3/2}|X|^{3/4} + |A||X|)
    double bound_b = 0; // |A|^3 |X|^{3/4} + |A|^{5/2} |X|
    double ratio_a = 0;
    double ratio_b = 0;
    double precondition_ratio = 0; // |A|^2 |X| / p^2
};

// Measured sum of dilate energies over X against the two stated bounds.
SumBoundReport rudnev_lhs_rhs(const FpSet& a, const FpSet& x);
// Multiplicative analogue with E_x(A, A+x); x = 0 is allowed in X.
SumBoundReport murphy_lhs_rhs(const FpSet& a, const FpSet& x);

struct LineCountReport {
    u128 count = 0;        // solutions of x1(a1-a2) = x2(a3-a4)
    double comparison_bound = 0; // |A|^3 |X|^{3/2} + |A|^2 |X|^2
    double ratio = 0;
};

LineCountReport line_solution_count(const FpSet& a, const FpSet& x);

// E_x(A, A+x): quadruples with a1(a2+x) = a3(a4+x).
u128 mult_energy(const FpSet& a, u64 x);

} // namespace spl
