#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "accretive_wave/estimate_lab.hpp"

using namespace awave;

namespace {

constexpr double kPi = std::numbers::pi;

EnsembleSpec spec_1d(std::size_t n, int count, std::uint64_t seed, bool nonnegative = false) {
    EnsembleSpec s{Grid(1, n, kPi)};
    s.count = count;
    s.seed = seed;
    s.nonnegative = nonnegative;
    return s;
}

void expect_ordered(const EstimateReport& r) {
    EXPECT_LE(r.ratio_mean, r.ratio_p95) << r.verifier_name;
    EXPECT_LE(r.ratio_p95, r.ratio_max) << r.verifier_name;
}

void expect_same_report(const EstimateReport& a, const EstimateReport& b) {
    EXPECT_EQ(a.ratio_max, b.ratio_max);
    EXPECT_EQ(a.ratio_mean, b.ratio_mean);
    EXPECT_EQ(a.ratio_p95, b.ratio_p95);
    EXPECT_EQ(a.parameters, b.parameters);
    EXPECT_EQ(a.pass, b.pass);
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST(Ensemble, DeterministicPerSeed) {
    const auto s = spec_1d(64, 5, 17);
    const auto a = generate_ensemble(s);
    const auto b = generate_ensemble(s);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].values, b[i].values);
    EXPECT_EQ(ensemble_member(s, 3).values, a[3].values);

    auto other = s;
    other.seed = 18;
    EXPECT_NE(generate_ensemble(other)[0].values, a[0].values);
    EXPECT_NE(a[0].values, a[1].values);
}

TEST(Ensemble, RealFieldsWithoutNyquistContent) {
    EnsembleSpec s{Grid(2, 16, 1.0)};
    s.count = 3;
    for (const Field& f : generate_ensemble(s)) {
        const auto F = forward_transform(f);
        EXPECT_LT(F.hermitian_defect(), 1e-14);
        for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
            if (f.grid.has_nyquist_component(i)) {
                EXPECT_LT(std::abs(F.coeffs[i]), 1e-15);
            }
        }
    }
}

TEST(Ensemble, NonnegativeFlagSquares) {
    const auto s = spec_1d(64, 20, 4, true);
    for (const Field& f : generate_ensemble(s)) {
        EXPECT_GE(*std::min_element(f.values.begin(), f.values.end()), 0.0);
    }
}

TEST(Ensemble, RefinementKeepsLowModes) {
    const auto coarse = spec_1d(32, 1, 9);
    auto fine = coarse;
    fine.grid = coarse.grid.refined(4);
    const auto A = forward_transform(ensemble_member(coarse, 0));
    const auto B = forward_transform(ensemble_member(fine, 0));
    for (long k = -15; k <= 15; ++k) {
        EXPECT_NEAR(std::abs(A.coeffs[coarse.grid.position(k)] - B.coeffs[fine.grid.position(k)]), 0.0,
                    1e-14);
    }
}

TEST(Ensemble, DecayTwoHasStableH1Norm) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto s = spec_1d(128, 1, seed);
        s.spectral_decay = 2.0;
        const double a = h_norm(ensemble_member(s, 0), 1.0);
        s.grid = s.grid.refined(2);
        const double b = h_norm(ensemble_member(s, 0), 1.0);
        EXPECT_LT(rel(b, a), 0.05) << "seed " << seed;
    }
}

TEST(KernelLinf, ConstantsSaturateTheBounds) {
    const Field one = Field::constant(Grid(1, 64, kPi), 1.0);
    for (double t : {0.25, 1.0, 4.0}) {
        EXPECT_NEAR(*k_linf_ratio(one, t), 1.0, 1e-13);
    }
    for (double t : {0.25, 0.5, 1.0}) {
        EXPECT_NEAR(*kdot_linf_ratio(one, t), 1.0, 1e-13);
    }
    EXPECT_FALSE(k_linf_ratio(Field(Grid(1, 64, kPi)), 1.0).has_value());
}

TEST(KernelLinf, EnsembleRespectsExplicitConstant) {
    const auto r = verify_kernel_linf(spec_1d(256, 100, 1), {0.25, 1.0, 4.0});
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.ratio_max, 1.0 + 1e-6);
    EXPECT_EQ(r.samples, 600);
    expect_ordered(r);
    EXPECT_THROW(verify_kernel_linf(spec_1d(64, 2, 1), {0.0}), DomainError);
    EXPECT_THROW(verify_kernel_linf(spec_1d(64, 2, 1), {}), DomainError);
}

TEST(KernelLinf, TwoDimensionalEnsemble) {
    EnsembleSpec s{Grid(2, 32, kPi)};
    s.count = 20;
    EXPECT_TRUE(verify_kernel_linf(s, {0.25, 1.0, 4.0}).pass);
}

TEST(ProductEstimate, ConstantRatioIndependentOfLevel) {
    const Grid g(1, 64, kPi);
    const double base = *product_ratio(Field::constant(g, 1.0), 0.0, 3);
    for (double c : {0.5, 2.0, 13.0}) {
        EXPECT_LT(rel(*product_ratio(Field::constant(g, c), 0.0, 3), base), 1e-12);
    }
}

TEST(ProductEstimate, EnsembleFiniteStableAndScaleFree) {
    auto s = spec_1d(128, 50, 11, true);
    const auto r = verify_product_estimate(s, 1.0, 2);
    EXPECT_TRUE(r.pass);
    expect_ordered(r);
    s.amplitude = 10.0;
    EXPECT_LT(rel(verify_product_estimate(s, 1.0, 2).ratio_max, r.ratio_max), 1e-10);

    const Field f = ensemble_member(s, 0);
    EXPECT_LT(rel(*product_ratio(7.0 * f, 0.0, 3), *product_ratio(f, 0.0, 3)), 1e-10);
}

TEST(ProductEstimate, RejectsOutsideHypotheses) {
    EXPECT_THROW(verify_product_estimate(spec_1d(64, 2, 1, false), 1.0, 2), DomainError);
    EXPECT_THROW(verify_product_estimate(spec_1d(64, 2, 1, true), 0.5, 2), DomainError);
    EXPECT_THROW(verify_product_estimate(spec_1d(64, 2, 1, true), -0.7, 2), DomainError);
    EXPECT_THROW(verify_product_estimate(spec_1d(64, 2, 1, true), 1.0, 1), DomainError);
}

TEST(PowerEstimate, ConstantsGiveRatioOne) {
    const Field c = Field::constant(Grid(1, 64, kPi), 3.0);
    EXPECT_NEAR(*power_ratio(c, 2.0, 2.5), 1.0, 1e-12);
    EXPECT_NEAR(*power_ratio(c, 1.5, 2.0), 1.0, 1e-12);
    EXPECT_NEAR(*power_ratio(c, 1.5, 2.0, PowerNorm::Gagliardo), 1.0, 1e-12);
}

TEST(PowerEstimate, IntegerBranchStable) {
    const auto r = verify_power_estimate(spec_1d(128, 50, 12, true), 2.0, 2.5);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.parameters.at("branch"), "integer");
    expect_ordered(r);
}

TEST(PowerEstimate, FractionalBranchAgreesWithGagliardo) {
    const auto r = verify_power_estimate(spec_1d(128, 50, 13, true), 1.5, 2.0);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.parameters.at("gagliardo_pass"), "true");
    const double bracket = std::stod(r.parameters.at("gagliardo_to_fourier"));
    EXPECT_GT(bracket, 0.1);
    EXPECT_LT(bracket, 10.0);
}

TEST(PowerEstimate, ScaleInvariant) {
    const auto s = spec_1d(64, 5, 14, true);
    for (const Field& f : generate_ensemble(s)) {
        EXPECT_LT(rel(*power_ratio(7.0 * f, 2.0, 2.5), *power_ratio(f, 2.0, 2.5)), 1e-10);
        EXPECT_LT(rel(*power_ratio(7.0 * f, 1.5, 2.0, PowerNorm::Gagliardo),
                      *power_ratio(f, 1.5, 2.0, PowerNorm::Gagliardo)),
                  1e-10);
    }
}

TEST(PowerEstimate, RejectsUnsupportedOrders) {
    EXPECT_THROW(verify_power_estimate(spec_1d(64, 2, 1, true), 2.5, 2.0), DomainError);
    EXPECT_THROW(verify_power_estimate(spec_1d(64, 2, 1, true), 4.0, 2.0), DomainError);
    EXPECT_THROW(verify_power_estimate(spec_1d(64, 2, 1, false), 2.0, 2.0), DomainError);
}

TEST(PowerDifference, FiniteStableAndScaleFree) {
    const auto r = verify_power_difference(spec_1d(128, 50, 15, true), 1.5, 2.0);
    EXPECT_TRUE(r.pass);
    const auto s = spec_1d(64, 2, 16);
    const Field U = ensemble_member(s, 0);
    const Field V = ensemble_member(s, 1);
    EXPECT_LT(rel(*power_difference_ratio(7.0 * U, 7.0 * V, 1.5, 3.0), *power_difference_ratio(U, V, 1.5, 3.0)),
              1e-10);
    EXPECT_FALSE(power_difference_ratio(U, U, 1.5, 2.0).has_value());
}

TEST(GagliardoNirenberg, ExponentRelation) {
    GagliardoNirenbergParams gn;
    gn.resolve(1);
    EXPECT_DOUBLE_EQ(*gn.p, 4.0);

    GagliardoNirenbergParams agmon;
    agmon.a = 0.5;
    agmon.resolve(1);
    EXPECT_TRUE(std::isinf(*agmon.p));

    GagliardoNirenbergParams wrong;
    wrong.a = 0.5;
    wrong.p = 4.0;
    EXPECT_THROW(wrong.resolve(1), ExponentMismatch);

    GagliardoNirenbergParams low;
    low.j = 1;
    low.m = 2;
    low.a = 0.25;
    EXPECT_THROW(low.resolve(1), DomainError);

    GagliardoNirenbergParams excluded;
    excluded.a = 1.0;
    excluded.r = 1.0;
    EXPECT_THROW(excluded.resolve(1), DomainError);
}

TEST(GagliardoNirenberg, ConstantWithDerivativeGivesZero) {
    GagliardoNirenbergParams gn;
    gn.j = 1;
    gn.m = 2;
    gn.a = 0.5;
    gn.resolve(1);
    EXPECT_EQ(*gagliardo_nirenberg_ratio(Field::constant(Grid(1, 64, kPi), 2.0), gn), 0.0);
}

TEST(GagliardoNirenberg, EnsembleStableAndScaleFree) {
    const auto s = spec_1d(128, 50, 21);
    const auto r = verify_gagliardo_nirenberg(s, GagliardoNirenbergParams{});
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.parameters.at("p"), "4");
    expect_ordered(r);

    GagliardoNirenbergParams gn;
    gn.resolve(1);
    const Field f = ensemble_member(s, 0);
    EXPECT_LT(rel(*gagliardo_nirenberg_ratio(7.0 * f, gn), *gagliardo_nirenberg_ratio(f, gn)), 1e-10);
}

TEST(GagliardoNirenberg, TwoDimensionalGradient) {
    EnsembleSpec s{Grid(2, 32, kPi)};
    s.count = 10;
    GagliardoNirenbergParams gn;
    gn.j = 1;
    gn.m = 2;
    gn.a = 0.5;
    gn.q = 2.0;
    gn.r = 2.0;
    EXPECT_TRUE(verify_gagliardo_nirenberg(s, gn).pass);
}

TEST(StrichartzHomogeneous, ZeroDataIsDegenerate) {
    const Grid g(1, 64, kPi);
    EXPECT_FALSE(strichartz_homogeneous_ratio(State::zero(g), kInfinity, 1.0, 4.0).has_value());
    auto s = spec_1d(64, 10, 1);
    s.amplitude = 0.0;
    const auto r = verify_strichartz_homogeneous(s, kInfinity, 1.0, 4.0);
    EXPECT_EQ(r.degenerate, 10);
    EXPECT_FALSE(r.pass);
}

TEST(StrichartzHomogeneous, EnsembleStableUnderWindowDoubling) {
    const auto s = spec_1d(64, 50, 31);
    const auto r = verify_strichartz_homogeneous(s, kInfinity, 1.0, 4.0);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.parameters.at("window_dependent"), "true");
    expect_ordered(r);

    const State U0(ensemble_member(s, 0), ensemble_member(s, 1));
    EXPECT_LT(rel(*strichartz_homogeneous_ratio(7.0 * U0, 4.0, 1.0, 2.0),
                  *strichartz_homogeneous_ratio(U0, 4.0, 1.0, 2.0)),
              1e-10);
}

TEST(StrichartzInhomogeneous, ConstantForcingClosedForm) {
    // omega = c t^2/2, omega_t = c t: the Y^mu norm at t is c vol^{1/2} (t^2/2 + t).
    const Field c = Field::constant(Grid(1, 64, kPi), 1.3);
    for (double T : {0.5, 1.0, 3.0}) {
        EXPECT_NEAR(*strichartz_inhomogeneous_ratio(c, kInfinity, 1.0, T), T / 2.0 + 1.0, 1e-12);
        EXPECT_NEAR(*strichartz_inhomogeneous_ratio(c, kInfinity, 2.0, T), T / 2.0 + 1.0, 1e-12);
    }
    EXPECT_FALSE(strichartz_inhomogeneous_ratio(Field(Grid(1, 64, kPi)), kInfinity, 1.0, 1.0).has_value());
}

TEST(StrichartzInhomogeneous, EnsembleWithinFactorTwoOnDoubledWindow) {
    const auto s = spec_1d(64, 50, 41);
    const auto r = verify_strichartz_inhomogeneous(s, kInfinity, 1.0, 1.0);
    EXPECT_TRUE(r.pass);
    const double factor = std::stod(r.parameters.at("window_factor"));
    EXPECT_GE(factor, 0.5);
    EXPECT_LE(factor, 2.0);

    const Field f = ensemble_member(s, 2);
    EXPECT_LT(rel(*strichartz_inhomogeneous_ratio(7.0 * f, kInfinity, 1.0, 1.0),
                  *strichartz_inhomogeneous_ratio(f, kInfinity, 1.0, 1.0)),
              1e-10);
}

TEST(Reports, DegenerateShareAboveTenPercentFails) {
    std::vector<std::optional<double>> ratios(20, 0.5);
    ratios[0] = std::nullopt;
    ratios[1] = std::nullopt;
    EXPECT_TRUE(detail::healthy(detail::summarize("x", ratios)));
    ratios[2] = std::nullopt;
    const auto r = detail::summarize("x", ratios);
    EXPECT_EQ(r.degenerate, 3);
    EXPECT_EQ(r.samples, 17);
    EXPECT_FALSE(detail::healthy(r));
}

TEST(Reports, RerunIsIdentical) {
    const auto s = spec_1d(64, 20, 5, true);
    expect_same_report(verify_power_estimate(s, 1.5, 2.0), verify_power_estimate(s, 1.5, 2.0));
    expect_same_report(verify_kernel_linf(s, {1.0}), verify_kernel_linf(s, {1.0}));
}
