#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "energy.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace spl;

namespace {

FpSet set_of(const FieldPtr& f, std::initializer_list<u64> xs) {
    return FpSet::from_elements(f, std::vector<u64>(xs));
}

} // namespace

TEST_CASE("additive energy examples") {
    auto f5 = make_field(5);
    const auto a = set_of(f5, {1, 2});
    CHECK(additive_energy(a, 1) == 6);
    CHECK(additive_energy(a, 2) == 4);

    auto f7 = make_field(7);
    const auto b = set_of(f7, {1, 2, 4});
    for (u64 xi = 1; xi < 7; ++xi) CHECK(additive_energy(b, xi) == 15);

    CHECK_THROWS_AS(additive_energy(a, 0), Error);
}

TEST_CASE("energy spectrum examples") {
    auto f5 = make_field(5);
    const auto spec = energy_spectrum(set_of(f5, {1, 2}));
    CHECK(spec.at(1) == 6);
    CHECK(spec.at(2) == 4);
    CHECK(spec.at(3) == 4);
    CHECK(spec.at(4) == 6);

    auto f7 = make_field(7);
    const auto spec7 = energy_spectrum(set_of(f7, {1, 2, 4}));
    for (u64 xi = 1; xi < 7; ++xi) CHECK(spec7.at(xi) == 15);

    const auto single = energy_spectrum(set_of(f7, {3}));
    for (u64 xi = 1; xi < 7; ++xi) CHECK(single.at(xi) == 1);

    CHECK_THROWS_AS(energy_spectrum(FpSet::from_elements(f5, {})), Error);
}

TEST_CASE("spectrum equals quadruple-enumeration oracle on tiny sets") {
    Xoshiro256ss rng(311);
    for (u64 p : {5ull, 7ull, 11ull, 13ull}) {
        auto f = make_field(p);
        const auto a = FpSet::random_uniform(f, 2 + rng.below(std::min<u64>(p, 6) - 1), rng.next());
        const auto spec = energy_spectrum(a);
        for (u64 xi = 1; xi < p; ++xi) CHECK(spec.at(xi) == oracle::additive_energy(a, xi));
    }
}

TEST_CASE("full set is exactly uniform") {
    for (u64 p : {2ull, 3ull, 7ull, 11ull}) {
        auto f = make_field(p);
        std::vector<u64> all(p);
        for (u64 i = 0; i < p; ++i) all[i] = i;
        const auto spec = energy_spectrum(FpSet::from_elements(f, all));
        for (u64 xi = 1; xi < p; ++xi) CHECK(spec.at(xi) == u128(p) * p * p);
    }
}

TEST_CASE("bkt identity examples") {
    auto f5 = make_field(5);
    const auto c1 = bkt_check(set_of(f5, {1, 2}));
    CHECK(c1.lhs == 20);
    CHECK(c1.rhs == 20);
    CHECK(c1.equal);

    auto f7 = make_field(7);
    const auto c2 = bkt_check(set_of(f7, {1, 2, 4}));
    CHECK(c2.lhs == 90);
    CHECK(c2.rhs == 90);
    CHECK(c2.equal);

    // A = F_p: p^4 + p*p^2 - 2 p^3
    std::vector<u64> all(7);
    for (u64 i = 0; i < 7; ++i) all[i] = i;
    const auto c3 = bkt_check(FpSet::from_elements(f7, all));
    CHECK(c3.lhs == BigInt(7 * 7 * 7) * 7 + BigInt(7 * 7 * 7) - 2 * BigInt(7 * 7 * 7));
    CHECK(c3.equal);
}

TEST_CASE("bkt corollary: exact rationals") {
    auto f5 = make_field(5);
    const auto spec = energy_spectrum(set_of(f5, {1, 2}));
    const auto cor = bkt_corollary_check(spec, set_of(f5, {1, 2, 3, 4}));
    CHECK(cor.lhs == Rational(36, 5)); // 20 - 4*16/5
    CHECK(cor.bound == 20);
    CHECK(cor.holds);

    const auto empty = bkt_corollary_check(spec, FpSet::from_elements(f5, {}));
    CHECK(empty.lhs == 0);

    auto f7 = make_field(7);
    const auto spec7 = energy_spectrum(set_of(f7, {1, 2, 4}));
    const auto cor7 = bkt_corollary_check(spec7, set_of(f7, {1, 2, 3, 4, 5, 6}));
    CHECK(cor7.lhs == Rational(144, 7)); // 90 - 6*81/7
    CHECK(cor7.bound == 63);
    CHECK(cor7.holds);
    CHECK(bkt_corollary_full(spec7).lhs == Rational(144, 7));

    CHECK_THROWS_AS(bkt_corollary_check(spec, set_of(f5, {0, 1})), Error);
}

TEST_CASE("dyadic census examples") {
    auto f5 = make_field(5);
    const auto spec = energy_spectrum(set_of(f5, {1, 2}));
    const auto census = dyadic_census(spec, Rational(2));
    CHECK(census.over_threshold_count == 2); // E = 6 > 8/2 at xi in {1,4}
    CHECK(census.bucket_count == 1);
    CHECK(census.bucket_sizes == std::vector<u64>{2});
    CHECK(census.below_all_buckets == 2);
    CHECK(census.k_le_p_over_n);     // 2 <= 5/2
    CHECK_FALSE(census.k_le_sqrt_n); // 2 > sqrt(2)

    auto f7 = make_field(7);
    const auto census7 = dyadic_census(set_of(f7, {1, 2, 4}), Rational(2));
    CHECK(census7.over_threshold_count == 6); // all E = 15 > 27/2

    const auto census1 = dyadic_census(spec, Rational(1));
    CHECK(census1.over_threshold_count == 0); // nothing above |A|^3
    CHECK(census1.bucket_count == 0);
    CHECK(census1.below_all_buckets == 4);

    CHECK_THROWS_AS(dyadic_census(spec, Rational(1, 2)), Error);
}

TEST_CASE("census partition invariant on random sets") {
    Xoshiro256ss rng(404);
    auto f = make_field(101);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = FpSet::random_uniform(f, 2 + rng.below(60), rng.next());
        const auto spec = energy_spectrum(a);
        for (const auto& k : {Rational(2), Rational(4), Rational(8), Rational(7, 2)}) {
            const auto census = dyadic_census(spec, k);
            u64 total = census.below_all_buckets;
            for (u64 b : census.bucket_sizes) total += b;
            CHECK(total == 100); // buckets partition F_p^*
        }
    }
}

TEST_CASE("rudnev lhs/rhs examples") {
    auto f5 = make_field(5);
    const auto a = set_of(f5, {1, 2});
    const auto r = rudnev_lhs_rhs(a, set_of(f5, {1, 2}));
    CHECK(r.lhs == 10);
    CHECK(r.bound_a == doctest::Approx(21.4498).epsilon(1e-4));
    CHECK(r.ratio_a == doctest::Approx(0.46621).epsilon(1e-4));
    CHECK(r.bound_b == doctest::Approx(24.7681).epsilon(1e-4));
    CHECK(r.precondition_ratio == doctest::Approx(4.0 * 2.0 / 25.0));

    const auto single = rudnev_lhs_rhs(a, set_of(f5, {1}));
    CHECK(single.lhs == 6); // E_+(A)

    auto f7 = make_field(7);
    const auto r7 = rudnev_lhs_rhs(set_of(f7, {1, 2, 4}), set_of(f7, {1, 2, 3, 4, 5, 6}));
    CHECK(r7.lhs == 90);

    CHECK_THROWS_AS(rudnev_lhs_rhs(a, set_of(f5, {0, 1})), Error);
}

TEST_CASE("rudnev lhs never exceeds |X| |A|^3") {
    Xoshiro256ss rng(500);
    auto f = make_field(101);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = FpSet::random_uniform(f, 1 + rng.below(50), rng.next());
        std::vector<u64> xs;
        const u64 m = 1 + rng.below(40);
        for (u64 i = 1; i <= m; ++i) xs.push_back(i);
        const auto x = FpSet::from_elements(f, xs);
        const auto r = rudnev_lhs_rhs(a, x);
        const BigInt n(a.size());
        CHECK(r.lhs <= BigInt(x.size()) * n * n * n);
    }
}

TEST_CASE("line solution count") {
    auto f5 = make_field(5);
    const auto a = set_of(f5, {1, 2});
    CHECK(line_solution_count(a, set_of(f5, {1})).count == 6);
    CHECK(line_solution_count(a, set_of(f5, {1, 2})).count == 20); // brute oracle value
    CHECK(line_solution_count(a, set_of(f5, {1, 2})).count ==
          oracle::line_count(a, set_of(f5, {1, 2})));

    const auto single = set_of(f5, {3});
    CHECK(line_solution_count(single, set_of(f5, {1, 2, 4})).count == 9); // |X|^2

    Xoshiro256ss rng(61);
    auto f13 = make_field(13);
    for (int trial = 0; trial < 10; ++trial) {
        const auto s = FpSet::random_uniform(f13, 1 + rng.below(5), rng.next());
        std::vector<u64> xs;
        for (u64 i = 1; i <= 1 + rng.below(4); ++i) xs.push_back(i);
        const auto x = FpSet::from_elements(f13, xs);
        CHECK(line_solution_count(s, x).count == oracle::line_count(s, x));
    }

    CHECK_THROWS_AS(line_solution_count(a, set_of(f5, {0})), Error);
}

TEST_CASE("multiplicative energy") {
    auto f5 = make_field(5);
    const auto a = set_of(f5, {1, 2});
    CHECK(mult_energy(a, 0) == 6);
    CHECK(mult_energy(a, 1) == 4);
    CHECK(mult_energy(set_of(f5, {3}), 2) == 1);

    // sets containing 0 exercise the zero-product bookkeeping
    Xoshiro256ss rng(71);
    auto f11 = make_field(11);
    for (int trial = 0; trial < 15; ++trial) {
        const auto s = FpSet::random_uniform(f11, 1 + rng.below(6), rng.next());
        for (u64 x = 0; x < 11; ++x) CHECK(mult_energy(s, x) == oracle::mult_energy(s, x));
    }
}

TEST_CASE("murphy mirrors rudnev with multiplicative energy") {
    auto f5 = make_field(5);
    const auto a = set_of(f5, {1, 2});
    const auto m = murphy_lhs_rhs(a, set_of(f5, {1}));
    CHECK(m.lhs == 4); // E_x(A, A+1)
    // 0 is allowed in X here
    const auto m0 = murphy_lhs_rhs(a, set_of(f5, {0}));
    CHECK(m0.lhs == 6); // E_x(A)
}

TEST_CASE("affine invariance of the spectrum") {
    Xoshiro256ss rng(808);
    auto f = make_field(101);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = FpSet::random_uniform(f, 2 + rng.below(50), rng.next());
        const auto spec = energy_spectrum(a);
        const u64 lambda = 1 + rng.below(100);
        const u64 c = rng.below(101);
        const auto spec_img = energy_spectrum(a.affine_image(lambda, c));
        CHECK(spec.values() == spec_img.values());
    }
}

TEST_CASE("spectrum bounds: diagonal, cap, cauchy-schwarz floor") {
    Xoshiro256ss rng(909);
    for (u64 p : {11ull, 101ull, 257ull}) {
        auto f = make_field(p);
        for (int trial = 0; trial < 5; ++trial) {
            const auto a = FpSet::random_uniform(f, 1 + rng.below(p - 1), rng.next());
            const auto spec = energy_spectrum(a);
            const BigInt n(a.size());
            for (u64 xi = 1; xi < p; ++xi) {
                const BigInt e = to_bigint(spec.at(xi));
                CHECK(e >= n * n);
                CHECK(e <= n * n * n);
                CHECK(BigInt(p) * e >= n * n * n * n);
            }
        }
    }
}
