#include "doctest.h"

#include <cmath>
#include <vector>

#include "support/oracles.hpp"
#include "synth/stats/stats.hpp"

using namespace synth;
using namespace synth::stats;

TEST_CASE("describe computes sample statistics") {
    SummaryStats s = describe({63.0, 68.0, 76.0});
    CHECK(s.n == 3);
    CHECK(s.mean == doctest::Approx(69.0));
    CHECK(s.sd == doctest::Approx(6.5574385243).epsilon(1e-9));
    CHECK(s.median == doctest::Approx(68.0));
    CHECK(s.min == 63.0);
    CHECK(s.max == 76.0);
}

TEST_CASE("describe handles constant vectors and even n") {
    SummaryStats constant = describe({5.0, 5.0, 5.0});
    CHECK(constant.mean == 5.0);
    CHECK(constant.sd == 0.0);
    CHECK(constant.median == 5.0);

    CHECK(describe({1.0, 2.0, 3.0, 4.0}).median == doctest::Approx(2.5));
    // Order must not matter.
    CHECK(describe({4.0, 1.0, 3.0, 2.0}).median == doctest::Approx(2.5));
}

TEST_CASE("describe requires at least two samples") {
    CHECK_THROWS_AS(describe({}), InsufficientData);
    CHECK_THROWS_AS(describe({42.0}), InsufficientData);
}

TEST_CASE("t_cdf matches closed forms") {
    CHECK(t_cdf(0.0, 1.0) == 0.5);
    CHECK(t_cdf(0.0, 58.0) == 0.5);
    // Cauchy (df=1): CDF = 1/2 + arctan(t)/pi.
    CHECK(t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(t_cdf(-1.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
    for (double t : {0.3, 1.7, 5.0, 40.0}) {
        CHECK(t_cdf(t, 1.0) ==
              doctest::Approx(0.5 + std::atan(t) / M_PI).epsilon(1e-12));
    }
    CHECK(t_cdf(2.0, 10.0) == doctest::Approx(0.96327).epsilon(1e-4));
    CHECK(2.0 * (1.0 - t_cdf(2.0, 10.0)) == doctest::Approx(0.07339).epsilon(1e-4));
}

TEST_CASE("t_cdf agrees with the quadrature oracle to 1e-9") {
    for (double df : {1.0, 2.0, 5.0, 10.0, 58.0, 120.0}) {
        for (double t : {0.0, 0.5, 1.0, 2.0, 4.0, 10.0}) {
            const double expected = testing::oracle_t_cdf(t, df);
            CHECK(std::abs(t_cdf(t, df) - expected) <= 1e-9);
            CHECK(std::abs(t_cdf(-t, df) - (1.0 - expected)) <= 1e-9);
        }
    }
}

TEST_CASE("t_cdf antisymmetry and monotonicity") {
    for (double df : {0.5, 1.0, 3.7, 29.0, 200.0}) {
        double previous = -1.0;
        for (double t = -30.0; t <= 30.0; t += 0.37) {
            const double c = t_cdf(t, df);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            CHECK(c >= previous);
            CHECK(std::abs(t_cdf(-t, df) + c - 1.0) <= 1e-12);
            previous = c;
        }
    }
    CHECK(t_cdf(1e8, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t_cdf(-1e8, 5.0) < 1e-12);
}

TEST_CASE("t_cdf rejects a non-positive df") {
    CHECK_THROWS_AS(t_cdf(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(t_cdf(1.0, -2.0), DomainError);
}

TEST_CASE("regularized incomplete beta hits exact identities") {
    CHECK(regularized_incomplete_beta(0.0, 2.0, 3.0) == 0.0);
    CHECK(regularized_incomplete_beta(1.0, 2.0, 3.0) == 1.0);
    // I_x(1, 1) = x.
    for (double x : {0.1, 0.25, 0.5, 0.9}) {
        CHECK(regularized_incomplete_beta(x, 1.0, 1.0) == doctest::Approx(x).epsilon(1e-12));
    }
    // I_x(1, b) = 1 - (1-x)^b.
    CHECK(regularized_incomplete_beta(0.3, 1.0, 4.0) ==
          doctest::Approx(1.0 - std::pow(0.7, 4.0)).epsilon(1e-12));
    // Symmetry I_x(a, b) = 1 - I_{1-x}(b, a).
    CHECK(regularized_incomplete_beta(0.37, 2.5, 4.5) ==
          doctest::Approx(1.0 - regularized_incomplete_beta(0.63, 4.5, 2.5)).epsilon(1e-12));
}

TEST_CASE("pooled t-test reproduces the published pairwise p-values") {
    // Overall-score summaries for the four engines (n = 30 profiles each).
    TTestResult equivalent = t_test_summary(30, 76.17, 3.90, 30, 76.27, 2.84);
    CHECK(equivalent.df == 58.0);
    CHECK(equivalent.p == doctest::Approx(0.910).epsilon(0.005));
    CHECK_FALSE(equivalent.significant);

    TTestResult separated = t_test_summary(30, 71.17, 2.96, 30, 67.83, 3.26);
    CHECK(std::abs(separated.p - 0.0001) < 0.00005);
    CHECK(separated.significant);

    // The four cross-tier comparisons are all strongly significant.
    CHECK(t_test_summary(30, 76.27, 2.84, 30, 71.17, 2.96).p < 0.001);
    CHECK(t_test_summary(30, 76.27, 2.84, 30, 67.83, 3.26).p < 0.001);
    CHECK(t_test_summary(30, 76.17, 3.90, 30, 71.17, 2.96).p < 0.001);
    CHECK(t_test_summary(30, 76.17, 3.90, 30, 67.83, 3.26).p < 0.001);
}

TEST_CASE("t-test edge behavior") {
    TTestResult symmetric = t_test_summary(10, 4.2, 1.0, 10, 4.2, 1.0);
    CHECK(symmetric.t == 0.0);
    CHECK(symmetric.p == 1.0);

    CHECK_THROWS_AS(t_test_summary(10, 1.0, 0.0, 10, 2.0, 0.0), DegenerateTest);
    CHECK_THROWS_AS(t_test_summary(1, 1.0, 1.0, 10, 2.0, 1.0), InsufficientData);
    CHECK_THROWS_AS(t_test_summary(10, 1.0, -0.5, 10, 2.0, 1.0), DomainError);
}

TEST_CASE("t_test equals the summary composition") {
    const std::vector<double> a = {63, 68, 76, 71, 69, 74, 66, 70, 73, 65};
    const std::vector<double> b = {75, 78, 72, 80, 77, 74, 79, 76, 73, 81};
    TTestResult direct = t_test(a, b);
    SummaryStats sa = describe(a), sb = describe(b);
    TTestResult composed = t_test_summary(sa.n, sa.mean, sa.sd, sb.n, sb.mean, sb.sd);
    CHECK(direct.t == doctest::Approx(composed.t).epsilon(1e-14));
    CHECK(direct.p == doctest::Approx(composed.p).epsilon(1e-14));
    CHECK(direct.df == composed.df);

    // p agrees with the quadrature oracle through the CDF.
    const double oracle_p = 2.0 * (1.0 - testing::oracle_t_cdf(std::abs(direct.t), direct.df));
    CHECK(std::abs(direct.p - oracle_p) <= 1e-9);
}

TEST_CASE("t-test is location and scale invariant") {
    std::vector<double> a = {3.1, 4.7, 2.2, 5.9, 4.4, 3.8};
    std::vector<double> b = {6.0, 5.1, 7.3, 6.6, 5.8, 7.0};
    TTestResult base = t_test(a, b);

    auto shifted = [](std::vector<double> v, double c) {
        for (double& x : v) x += c;
        return v;
    };
    auto scaled = [](std::vector<double> v, double k) {
        for (double& x : v) x *= k;
        return v;
    };
    TTestResult shift = t_test(shifted(a, 120.5), shifted(b, 120.5));
    CHECK(shift.t == doctest::Approx(base.t).epsilon(1e-12));
    CHECK(shift.p == doctest::Approx(base.p).epsilon(1e-12));

    TTestResult scale = t_test(scaled(a, 7.25), scaled(b, 7.25));
    CHECK(scale.t == doctest::Approx(base.t).epsilon(1e-12));
    CHECK(scale.p == doctest::Approx(base.p).epsilon(1e-12));

    TTestResult self = t_test(a, a);
    CHECK(self.t == 0.0);
    CHECK(self.p == 1.0);
}
