#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "accretive_wave/wave_propagators.hpp"
#include "test_util.hpp"

using namespace awave;
using awave::testing::max_abs_difference;
using awave::testing::relative_l2_difference;
using awave::testing::smooth_random_field;

namespace {

const Grid kPiGrid(1, 32, std::numbers::pi);

Field cosine(const Grid& g, double amplitude = 1.0) {
    return sample(g, [&](auto x) { return amplitude * std::cos(x[0]); });
}

Field remove_mean(Field f) {
    double mean = 0.0;
    for (double x : f.values) mean += x;
    mean /= static_cast<double>(f.values.size());
    for (auto& x : f.values) x -= mean;
    return f;
}

// Manufactured forcing for w(t, x) = t^2 cos x: w_tt - w_xx = (2 + t^2) cos x.
std::vector<std::pair<double, Field>> manufactured_forcing(double t, std::size_t count) {
    std::vector<std::pair<double, Field>> forcing;
    for (double s : uniform_nodes(t, count)) forcing.emplace_back(s, cosine(kPiGrid, 2.0 + s * s));
    return forcing;
}

}  // namespace

TEST(PropagatorSet, ZeroFrequencyLimitsAndTrigIdentity) {
    const Grid g(2, 16, 1.3);
    for (double t : {0.0, 0.37, 2.0, 11.5}) {
        const PropagatorSet P(g, t);
        EXPECT_EQ(P.m_K[0], t);
        EXPECT_EQ(P.m_Kdot[0], 1.0);
        EXPECT_EQ(P.m_DeltaK[0], 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_LE(std::abs(P.m_Kdot[i]), 1.0);
            EXPECT_NEAR(P.m_Kdot[i] * P.m_Kdot[i] - P.m_DeltaK[i] * P.m_K[i], 1.0, 1e-12);
        }
    }
    EXPECT_THROW(PropagatorSet(g, -0.1), DomainError);
}

TEST(PropagatorSet, CosineAdditionLaw) {
    const Grid g(3, 16, 2.0);
    const double t = 0.8;
    const double s = 1.9;
    const PropagatorSet Pt(g, t);
    const PropagatorSet Ps(g, s);
    const PropagatorSet Pts(g, t + s);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(Pts.m_Kdot[i], Pt.m_Kdot[i] * Ps.m_Kdot[i] + Pt.m_DeltaK[i] * Ps.m_K[i], 1e-12);
    }
}

TEST(ApplyK, ConstantGrowsLinearly) {
    const auto out = apply_K(2.5, Field::constant(kPiGrid, 3.0));
    for (double x : out.values) EXPECT_NEAR(x, 7.5, 1e-13);
}

TEST(ApplyK, CosineMode) {
    for (double t : {0.3, 1.0, 3.7}) {
        const auto expected = cosine(kPiGrid, std::sin(t));
        EXPECT_LT(max_abs_difference(apply_K(t, cosine(kPiGrid)), expected), 1e-12);
    }
    EXPECT_EQ(linf_norm(apply_K(0.0, cosine(kPiGrid))), 0.0);
}

TEST(ApplyKdot, IdentityAtZeroAndCosineMode) {
    const Field f = smooth_random_field(kPiGrid, 4);
    const auto same = apply_Kdot(0.0, f);
    EXPECT_EQ(same.values, f.values);
    for (double t : {0.3, 1.0, 3.7}) {
        EXPECT_LT(max_abs_difference(apply_Kdot(t, cosine(kPiGrid)), cosine(kPiGrid, std::cos(t))),
                  1e-12);
    }
}

TEST(ApplyDeltaK, AnnihilatesConstants) {
    EXPECT_LT(linf_norm(apply_DeltaK(1.7, Field::constant(kPiGrid, 5.0))), 1e-14);
    EXPECT_LT(max_abs_difference(apply_DeltaK(0.6, cosine(kPiGrid)), cosine(kPiGrid, -std::sin(0.6))),
              1e-12);
}

TEST(HomogeneousSolution, StandingWave) {
    const State U0(cosine(kPiGrid), Field(kPiGrid));
    for (double t = 0.0; t <= 4.0; t += 0.25) {
        const State U = homogeneous_solution(t, U0);
        EXPECT_LT(max_abs_difference(U.u, cosine(kPiGrid, std::cos(t))), 1e-12);
        EXPECT_LT(max_abs_difference(U.v, cosine(kPiGrid, -std::sin(t))), 1e-12);
    }
}

TEST(HomogeneousSolution, MeanDrift) {
    const State U0(Field(kPiGrid), Field::constant(kPiGrid, 1.5));
    const State U = homogeneous_solution(2.0, U0);
    for (double x : U.u.values) EXPECT_NEAR(x, 3.0, 1e-13);
    for (double x : U.v.values) EXPECT_NEAR(x, 1.5, 1e-13);
}

TEST(HomogeneousSolution, IdentityAtTimeZero) {
    const State U0(smooth_random_field(kPiGrid, 8), smooth_random_field(kPiGrid, 9));
    const State U = homogeneous_solution(0.0, U0);
    EXPECT_EQ(U.u.values, U0.u.values);
    EXPECT_EQ(U.v.values, U0.v.values);
}

TEST(HomogeneousSolution, ConservesLinearEnergy) {
    const Grid g(2, 32, 2.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const State U0(remove_mean(smooth_random_field(g, seed)),
                       remove_mean(smooth_random_field(g, seed + 50)));
        const double E0 = linear_energy(U0);
        for (double t = 0.5; t <= 4.0; t += 0.5) {
            EXPECT_NEAR(linear_energy(homogeneous_solution(t, U0)) / E0, 1.0, 1e-10);
        }
    }
}

TEST(HomogeneousSolution, GroupProperty) {
    const Grid g(1, 64, 3.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const State U0(smooth_random_field(g, seed), smooth_random_field(g, seed + 100));
        const double t = 0.4 + 0.1 * static_cast<double>(seed);
        const double s = 1.3;
        const State two_step = homogeneous_solution(s, homogeneous_solution(t, U0));
        const State one_step = homogeneous_solution(t + s, U0);
        const double scale = phase_norm(one_step, 1.0).total;
        EXPECT_LT(phase_norm(two_step - one_step, 1.0).total / scale, 1e-11);
    }
}

TEST(DuhamelIntegral, ZeroForcing) {
    std::vector<std::pair<double, Field>> forcing;
    for (double s : uniform_nodes(1.0, 9)) forcing.emplace_back(s, Field(kPiGrid));
    const State W = duhamel_integral(1.0, forcing);
    EXPECT_EQ(linf_norm(W.u), 0.0);
    EXPECT_EQ(linf_norm(W.v), 0.0);
}

TEST(DuhamelIntegral, ConstantForcingIsExactAtZeroMode) {
    const double c = 1.75;
    const double t = 0.9;
    std::vector<std::pair<double, Field>> forcing;
    for (double s : uniform_nodes(t, 5)) forcing.emplace_back(s, Field::constant(kPiGrid, c));
    const State W = duhamel_integral(t, forcing);
    for (double x : W.u.values) EXPECT_NEAR(x, c * t * t / 2.0, 1e-14);
    for (double x : W.v.values) EXPECT_NEAR(x, c * t, 1e-14);
}

TEST(DuhamelIntegral, ManufacturedSolution) {
    const double t = 0.5;
    const State W = duhamel_integral(t, manufactured_forcing(t, 33));
    EXPECT_LT(max_abs_difference(W.u, cosine(kPiGrid, t * t)), 1e-6);
    EXPECT_LT(max_abs_difference(W.v, cosine(kPiGrid, 2.0 * t)), 1e-6);
}

TEST(DuhamelIntegral, FourthOrderInNodeSpacing) {
    const double t = 0.5;
    auto error = [&](std::size_t count) {
        const State W = duhamel_integral(t, manufactured_forcing(t, count));
        return max_abs_difference(W.u, cosine(kPiGrid, t * t)) +
               max_abs_difference(W.v, cosine(kPiGrid, 2.0 * t));
    };
    const double e5 = error(5);
    const double e9 = error(9);
    const double e17 = error(17);
    EXPECT_NEAR(e5 / e9, 16.0, 2.0);
    EXPECT_NEAR(e9 / e17, 16.0, 2.0);
}

TEST(DuhamelIntegral, RejectsBadNodes) {
    auto forcing = manufactured_forcing(1.0, 4);
    EXPECT_THROW(duhamel_integral(1.0, forcing), QuadratureError);
    forcing = manufactured_forcing(1.0, 5);
    forcing[2].first += 0.01;
    EXPECT_THROW(duhamel_integral(1.0, forcing), QuadratureError);
    forcing = manufactured_forcing(1.0, 5);
    EXPECT_THROW(duhamel_integral(2.0, forcing), QuadratureError);
    EXPECT_THROW(simpson_weights(6, 0.1), QuadratureError);
}
