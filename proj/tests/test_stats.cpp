#include <gtest/gtest.h>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <random>

#include "lpbf/error.hpp"
#include "lpbf/stats.hpp"

using namespace lpbf;

TEST(IncompleteBeta, MatchesBoost) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> shape(0.1, 60.0), unit(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const double a = shape(rng), b = shape(rng), x = unit(rng);
        const double ref = boost::math::ibeta(a, b, x);
        EXPECT_NEAR(stats::incomplete_beta(a, b, x), ref, 1e-12 + 1e-10 * ref) << a << " " << b << " " << x;
    }
}

TEST(IncompleteBeta, Endpoints) {
    EXPECT_EQ(stats::incomplete_beta(2.0, 3.0, 0.0), 0.0);
    EXPECT_EQ(stats::incomplete_beta(2.0, 3.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(stats::incomplete_beta(1.0, 1.0, 0.3), 0.3);
}

TEST(IncompleteBeta, Symmetry) {
    for (double x : {0.01, 0.2, 0.5, 0.77, 0.999})
        EXPECT_NEAR(stats::incomplete_beta(3.5, 1.25, x) + stats::incomplete_beta(1.25, 3.5, 1.0 - x), 1.0, 1e-13);
}

TEST(IncompleteBeta, RejectsBadArguments) {
    EXPECT_THROW(stats::incomplete_beta(0.0, 1.0, 0.5), DomainError);
    EXPECT_THROW(stats::incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST(StudentT, TwoSidedMatchesBoost) {
    for (double dof : {1.0, 3.0, 7.0, 57.0, 400.0}) {
        const boost::math::students_t dist(dof);
        for (double t : {0.0, 0.1, -0.7, 1.96, 3.3, -12.0, 40.0}) {
            const double ref = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
            EXPECT_NEAR(stats::student_t_two_sided(t, dof), ref, 1e-13 + 1e-10 * ref) << dof << " " << t;
        }
    }
    EXPECT_EQ(stats::student_t_two_sided(INFINITY, 5.0), 0.0);
}

TEST(FTail, MatchesBoost) {
    for (auto [d1, d2] : {std::pair{1.0, 5.0}, {2.0, 57.0}, {5.0, 54.0}, {12.0, 3.0}}) {
        const boost::math::fisher_f dist(d1, d2);
        for (double f : {0.01, 0.5, 1.0, 4.2, 30.0, 900.0}) {
            const double ref = boost::math::cdf(boost::math::complement(dist, f));
            EXPECT_NEAR(stats::f_upper_tail(f, d1, d2), ref, 1e-13 + 1e-10 * ref) << d1 << " " << d2 << " " << f;
        }
    }
    EXPECT_EQ(stats::f_upper_tail(0.0, 2.0, 3.0), 1.0);
}
