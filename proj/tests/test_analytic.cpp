#include <doctest.h>

#include <cmath>

#include "yule/analytic.hpp"

using namespace yule;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("first-success pmf values and normalisation") {
    CHECK(fs_pmf(0.5, 1) == doctest::Approx(0.5));
    CHECK(fs_pmf(0.5, 3) == doctest::Approx(0.125));
    // geometric normalisation: the k-term remainder is (1-y)^k
    double sum = 0.0;
    for (int k = 1; k <= 60; ++k) sum += fs_pmf(0.2, k);
    CHECK(std::abs(sum - 1.0) <= std::pow(0.8, 60) + 1e-12);
    for (int k = 61; k <= 70; ++k) sum += fs_pmf(0.2, k);
    CHECK(std::abs(sum - 1.0) <= 1e-6);
    CHECK_THROWS_AS(fs_pmf(0.0, 1), std::domain_error);
    CHECK_THROWS_AS(fs_pmf(1.0, 1), std::domain_error);
    CHECK_THROWS_AS(fs_pmf(0.5, 0), std::domain_error);
}

TEST_CASE("length MGF is 1 at zero and matches the mean via its derivative") {
    CHECK(length_mgf(1.0, 1.0, 0.0) == 1.0);
    // central difference at 0 against the closed-form mean e - 1
    const double h = 1e-5;
    const double deriv = (length_mgf(1.0, 1.0, h) - length_mgf(1.0, 1.0, -h)) / (2 * h);
    CHECK(std::abs(deriv - (std::exp(1.0) - 1.0)) <= 1e-4);
}

TEST_CASE("length mean handles the rate -> 0 limit") {
    CHECK(length_mean(0.0, 3.0) == doctest::Approx(3.0));
    CHECK(length_mean(1e-12, 3.0) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(length_mean(1.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0));
}

TEST_CASE("length MGF divergence point") {
    // rate*horizon = 1: the singularity sits exactly at x = rate
    CHECK(length_mgf_domain_max(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(length_mgf(1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(length_mgf(1.0, 1.0, 2.0), std::domain_error);

    // rate*horizon > 1: genuine pole below 1/horizon
    const double x_hi = length_mgf_domain_max(2.0, 1.0);
    CHECK(x_hi < 1.0);
    CHECK(std::abs(x_hi * std::exp((2.0 - x_hi) * 1.0) - 2.0) <= 1e-9);

    // rate*horizon < 1: x = rate is removable, the pole sits above 1/horizon
    const double x_lo = length_mgf_domain_max(0.5, 1.0);
    CHECK(x_lo > 1.0);
    CHECK(length_mgf(0.5, 1.0, 0.5) == doctest::Approx(2.0));  // 1/(1 - rate*horizon)
    CHECK(length_mgf(0.5, 1.0, 0.8) > 0.0);

    // rate 0: L = horizon exactly, MGF finite everywhere
    CHECK(std::isinf(length_mgf_domain_max(0.0, 2.0)));
    CHECK(length_mgf(0.0, 2.0, 3.0) == doctest::Approx(std::exp(6.0)));
}

TEST_CASE("miss probability of a single ray") {
    // just able to reach: argument of arccos is 1
    CHECK(miss_given_no_branch(1.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // long horizon: 1 - asin(r/d)/pi = 1 - asin(1/2)/pi = 5/6
    CHECK(miss_given_no_branch(10.0, 2.0, 1.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    // continuity across the seam t = sqrt(d^2 - r^2)
    const double d = 1.0, r = 0.4;
    const double seam = std::sqrt(d * d - r * r);
    const double from_arccos =
        1.0 - std::acos((d * d + seam * seam - r * r) / (2 * seam * d)) / kPi;
    const double from_arcsin = 1.0 - std::asin(r / d) / kPi;
    CHECK(std::abs(from_arccos - from_arcsin) <= 1e-12);
    CHECK(std::abs(miss_given_no_branch(seam, d, r) - from_arcsin) <= 1e-12);
    // range
    for (double t : {0.61, 0.8, 0.9, 1.5, 4.0}) {
        const double f = miss_given_no_branch(t, d, r);
        CHECK(f >= 0.0);
        CHECK(f <= 1.0);
    }
    CHECK_THROWS_AS(miss_given_no_branch(0.5, 2.0, 1.0), OutOfReach);
    CHECK_THROWS_AS(miss_given_no_branch(1.0, 1.0, 2.0), std::domain_error);
}

TEST_CASE("functional-equation kernels") {
    CHECK(fe_alpha0(1.0, 1.0) == doctest::Approx(kPi / 2));
    CHECK(fe_s0(2.0, 0.5, 0.0) == doctest::Approx(1.5));  // head-on: d - r
    CHECK(fe_travel_distance(1.0, 0.3, 0.0) == doctest::Approx(0.7));
    CHECK(fe_travel_distance(1.0, 1.5, 0.0) == doctest::Approx(0.5));
    const FeKernels k = fe_kernels(2.0, 0.5, 0.3, 0.1);
    CHECK(k.alpha0 == doctest::Approx(std::asin(0.25)));
    CHECK_THROWS_AS(fe_s0(2.0, 0.5, 1.0), std::domain_error);
}

TEST_CASE("radius product bound: high-rate limit and monotone scan") {
    const RadiusProductBound at100 = radius_lower_bound_product(100.0, 0.1);
    CHECK(at100.clamped > 0.99);
    CHECK(at100.clamped <= 1.0);
    double prev = -1.0;
    for (double rate : {5.0, 10.0, 20.0, 40.0}) {
        const RadiusProductBound b = radius_lower_bound_product(rate, 0.1);
        CHECK(b.clamped >= prev);  // not claimed in general; flagged if violated
        CHECK(b.clamped >= 0.0);
        CHECK(b.clamped <= 1.0);
        CHECK(b.value == doctest::Approx(b.factor_enough_leaves * b.factor_good_directions *
                                         b.factor_long_interval));
        prev = b.clamped;
    }
}

TEST_CASE("conditional radius bound: limits") {
    // p -> 1 drives the first factor to 1, so the bound approaches factor 2
    const double near_one = radius_lower_bound_conditional(50.0, 0.05, 0.5, 0.45, 1.0 - 1e-12);
    const double half = radius_lower_bound_conditional(50.0, 0.05, 0.5, 0.45, 0.5);
    CHECK(near_one > half);
    // small rates make the bound vacuous; it is returned unclamped
    CHECK(radius_lower_bound_conditional(1e-6, 0.05, 0.5, 0.45, 0.5) <= 0.0);
    CHECK(radius_lower_bound_conditional(0.0, 0.05, 0.5, 0.45, 0.5) <= 0.0);
    // the worked point at rate 200 evaluates to a nontrivial bound
    const double strong = radius_lower_bound_conditional(200.0, 0.05, 0.5, 0.45, 0.5);
    CHECK(strong > 0.9);
    CHECK(strong < 0.93);
    CHECK_THROWS_AS(radius_lower_bound_conditional(10.0, 0.05, 0.5, 0.45, 1.5),
                    std::domain_error);
    CHECK_THROWS_AS(radius_lower_bound_conditional(10.0, 0.5, 0.5, 0.45, 0.5),
                    std::domain_error);
}

TEST_CASE("first-success tail bound: closed form and domination") {
    // b Sum y^{n-a}/n at y=1/2, a=1/2, b=1 equals sqrt(2) log 2
    CHECK(fs_tail_bound(0.5, 0.5, 1.0) ==
          doctest::Approx(std::sqrt(2.0) * std::log(2.0)).epsilon(1e-12));
    for (double y : {0.5, 0.1, 0.01})
        for (double a : {0.3, 0.7})
            for (double b : {0.5, 1.0, 2.0}) {
                const double exact = fs_cdf_exact(y, b * std::pow(y, -a));
                CHECK(exact <= fs_tail_bound(y, a, b));
            }
}

TEST_CASE("exponential maximum bound dominates the exact value") {
    for (double a : {1.0, 2.0})
        for (double c : {0.3, 0.8})
            for (double b : {0.5, 2.0})
                for (double x : {1.0, 2.0, 4.0})
                    CHECK(exp_max_exact(a, b, c, x) <= exp_max_bound(a, b, c, x));
    // large x: both collapse to zero
    CHECK(exp_max_bound(1.0, 1.0, 0.5, 8.0) < 1e-10);
    CHECK(exp_max_exact(1.0, 1.0, 0.5, 8.0) < 1e-10);
    // c close to a: the bound stays below C e^{-b}, and C <= 1/(1 - e^{-cx})
    CHECK(exp_max_bound(1.0, 1.0, 0.999, 1.0) <=
          std::exp(-1.0) / (1.0 - std::exp(-0.999)));
    CHECK_THROWS_AS(exp_max_bound(0.5, 1.0, 0.6, 1.0), std::domain_error);
}

TEST_CASE("series sums against their logarithm closed forms") {
    // sum q^n/n = -log(1-q); sum q^n/(n+1) = (-log(1-q) - q)/q
    for (double q : {0.1, 0.5, 0.9, 0.99}) {
        CHECK(sum_qn_over_n(q).value == doctest::Approx(-std::log1p(-q)).epsilon(1e-12));
        CHECK(sum_qn_over_np1(q).value ==
              doctest::Approx((-std::log1p(-q) - q) / q).epsilon(1e-12));
        CHECK(sum_qn_over_n_from2(q).value ==
              doctest::Approx(-std::log1p(-q) - q).epsilon(1e-12));
    }
    CHECK(sum_qn_over_n(0.5).terms > 0);
}

TEST_CASE("rescaling identity for connection probabilities (Monte Carlo)") {
    // s = t: both sides are the same parameter set up to the seed
    CHECK(p_scaling_identity_check(1.0, 1.0, 0.3, 0.6, 1.0, 2, 5000, 21).agree);
    // (rate 1, t 2, r 0.4, |x| 1) against (rate 2, t 1, r 0.2, |x| 0.5)
    CHECK(p_scaling_identity_check(1.0, 2.0, 0.4, 1.0, 1.0, 2, 10000, 22).agree);
    // s = t/d form: (rate 1, t 2, r 0.4, |x| 0.8) vs (rate 0.8, t 2.5, r 0.5, |x| 1)
    CHECK(p_scaling_identity_check(1.0, 2.0, 0.4, 0.8, 2.5, 2, 10000, 23).agree);
}
