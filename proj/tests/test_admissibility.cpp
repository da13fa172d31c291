#include <gtest/gtest.h>

#include <cmath>

#include "accretive_wave/admissibility.hpp"

using namespace awave;

TEST(Nu, Examples) {
    EXPECT_EQ(nu(2.0, 3.0, 3), 0.0);
    EXPECT_EQ(nu(1.5, 2.0, 3), 0.0);
    EXPECT_DOUBLE_EQ(nu(0.0, 2.0, 2), 0.5);
    EXPECT_NEAR(nu(1.0, 3.0, 3), 1.0 / 3.0, 1e-15);
    EXPECT_THROW(nu(0.0, 1.0, 2), DomainError);
}

TEST(Nu, MonotoneInOrderAndPower) {
    for (int N = 1; N <= 3; ++N) {
        for (double p = 1.25; p < 6.0; p += 0.25) {
            for (double s = -1.0; s < 3.0; s += 0.1) {
                EXPECT_GE(nu(s, p, N), nu(s + 0.1, p, N));
                if (s < 0.5 * N) {
                    EXPECT_LE(nu(s, p, N), nu(s, p + 0.25, N));
                }
            }
        }
    }
}

TEST(Epsilon, Examples) {
    EXPECT_EQ(epsilon(2.5, 7.0, 3), 1.0);
    EXPECT_EQ(epsilon(4.0, 2.0, 3), 1.0);
    EXPECT_DOUBLE_EQ(epsilon(2.0, 2.0, 3), 0.5);
    EXPECT_THROW(epsilon(2.0, 0.9, 3), DomainError);
}

TEST(PRange, Examples) {
    const auto a = p_range(2.0, 3);
    EXPECT_EQ(a.lo, 1.0);
    EXPECT_DOUBLE_EQ(a.hi, 3.0);
    EXPECT_FALSE(a.lo_closed);
    EXPECT_DOUBLE_EQ(p_range(1.0, 2).hi, 2.0);
    EXPECT_TRUE(std::isinf(p_range(4.0, 3).hi));
    EXPECT_THROW(p_range(0.5, 3), DomainError);
    EXPECT_FALSE(a.contains(1.0));
    EXPECT_FALSE(a.contains(3.0));
    EXPECT_TRUE(a.contains(2.999));
}

TEST(PRange, PositiveEpsilonIffInteriorOnParameterGrid) {
    // 3 x 10 x 34 triples; endpoints included on purpose.
    int checked = 0;
    for (int N = 1; N <= 3; ++N) {
        for (int i = 0; i < 10; ++i) {
            const double mu = 1.0 + 0.25 * i;
            const Interval range = p_range(mu, N);
            for (int j = 0; j < 34; ++j) {
                const double p = 1.0 + 0.125 * (j + 1);
                const double eps = epsilon(mu, p, N);
                const bool interior = range.contains(p);
                // eps is exact 0 at the endpoint for these dyadic inputs.
                EXPECT_EQ(eps > 1e-12, interior) << "mu=" << mu << " p=" << p << " N=" << N;
                ++checked;
            }
        }
    }
    EXPECT_GE(checked, 1000);
}

TEST(PRange, UpperBoundDivergesAtThreshold) {
    for (int N = 1; N <= 3; ++N) {
        const double critical = 1.0 + 0.5 * N;
        EXPECT_GT(p_range(critical - 5e-4, N).hi, 1e3);
        EXPECT_LT(p_range(critical - 0.5, N).hi, 1e3);
    }
}

TEST(CheckAdmissible, IntegerTheoremExamples) {
    const auto ok = check_admissible(Theorem::IntegerP, 2.0, 2.0, 3);
    EXPECT_TRUE(ok.admissible);
    EXPECT_DOUBLE_EQ(ok.p_interval.hi, 3.0);
    ASSERT_TRUE(ok.eps.has_value());
    EXPECT_DOUBLE_EQ(*ok.eps, 0.5);

    const auto endpoint = check_admissible(Theorem::IntegerP, 2.0, 3.0, 3);
    EXPECT_FALSE(endpoint.admissible);
    EXPECT_NE(endpoint.reason.find("outside"), std::string::npos);

    EXPECT_FALSE(check_admissible(Theorem::IntegerP, 4.0, 2.5, 3).admissible);
    EXPECT_TRUE(check_admissible(Theorem::IntegerP, 4.0, 9.0, 3).admissible);
}

TEST(CheckAdmissible, RealTheoremExamples) {
    const auto high_dim = check_admissible(Theorem::RealP, 2.0, 1.5, 4);
    EXPECT_FALSE(high_dim.admissible);
    EXPECT_NE(high_dim.reason.find("N>3"), std::string::npos);

    EXPECT_TRUE(check_admissible(Theorem::RealP, 1.5, 1.5, 3).admissible);
    EXPECT_TRUE(check_admissible(Theorem::RealP, 3.0, 2.0, 2).admissible);
    EXPECT_FALSE(check_admissible(Theorem::RealP, 3.0, 1.5, 2).admissible);
    EXPECT_FALSE(check_admissible(Theorem::RealP, 2.5, 2.0, 1).admissible);

    // The order-set discrepancy is always disclosed.
    EXPECT_NE(check_admissible(Theorem::RealP, 1.5, 2.0, 1).reason.find("(1,2) U N*"),
              std::string::npos);
}

TEST(CheckAdmissible, AdmissibleImpliesInterval) {
    for (int N = 1; N <= 4; ++N) {
        for (double mu = 1.0; mu <= 4.0; mu += 0.25) {
            for (double p = 1.25; p <= 6.0; p += 0.25) {
                for (Theorem th : {Theorem::IntegerP, Theorem::RealP}) {
                    const auto d = check_admissible(th, mu, p, N);
                    if (d.admissible) {
                        EXPECT_TRUE(d.p_interval.contains(p));
                    }
                }
            }
        }
    }
}

TEST(NaturalTheorem, IntegerPowersUseIntegerTheory) {
    EXPECT_EQ(natural_theorem(2.0), Theorem::IntegerP);
    EXPECT_EQ(natural_theorem(5.0), Theorem::IntegerP);
    EXPECT_EQ(natural_theorem(2.5), Theorem::RealP);
    EXPECT_EQ(natural_theorem(1.5), Theorem::RealP);
}

TEST(StrichartzPair, Examples) {
    const auto a = strichartz_pair(kInfinity, 2.0);
    EXPECT_EQ(a.rho, 2.0);
    EXPECT_TRUE(std::isinf(a.dual_q));
    EXPECT_EQ(a.dual_rho, -1.0);
    EXPECT_EQ(a.dual_q_conjugate, 1.0);

    EXPECT_DOUBLE_EQ(strichartz_pair(2.0, 1.0).rho, 1.5);
    EXPECT_THROW(strichartz_pair(1.5, 1.0), DomainError);
}

TEST(StrichartzPair, ConditionHoldsIdentically) {
    for (double q : {2.0, 3.0, 4.5, 10.0, kInfinity}) {
        for (double dq : {2.0, 4.0, kInfinity}) {
            for (double mu = 1.0; mu <= 3.0; mu += 0.25) {
                const auto s = strichartz_pair(q, mu, dq);
                EXPECT_NEAR(s.rho - 1.0 / s.q - mu, 0.0, 1e-15);
                EXPECT_NEAR(1.0 - (s.dual_rho - 1.0 / s.dual_q) - mu, 0.0, 1e-15);
                EXPECT_NEAR(1.0 / s.dual_q + 1.0 / s.dual_q_conjugate, 1.0, 1e-15);
            }
        }
    }
}
