#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "levyruin/gallery.hpp"
#include "levyruin/ruin_classifier.hpp"
#include "oracles.hpp"
#include "random_models.hpp"

using namespace levyruin;

TEST(Classify, NegativeDriftIsCaseA) {
    const auto c = classify({1.0, 1.0, {ExponentialNegative{2.0, 1.0}}});
    EXPECT_EQ(c.ruin_case, RuinCase::A);
    EXPECT_DOUBLE_EQ(c.delta, -1.0);
    EXPECT_EQ(c.rate, 0.0);
}

TEST(Classify, ZeroDriftIsCaseA) {
    const auto c = classify({1.0, 1.0, {ExponentialNegative{1.0, 1.0}}});
    EXPECT_EQ(c.delta, 0.0);
    EXPECT_EQ(c.ruin_case, RuinCase::A);
}

TEST(Classify, PureDriftIsCaseC) {
    const auto c = classify({3.0, 0.0, {}});
    EXPECT_EQ(c.ruin_case, RuinCase::C);
    EXPECT_EQ(c.delta, 3.0);
}

TEST(Classify, PositiveJumpsWithNonNegativePremiumIsCaseC) {
    EXPECT_EQ(classify({0.0, 0.0, {ExponentialPositive{1.0, 2.0}}}).ruin_case, RuinCase::C);
}

TEST(Classify, NegativePremiumWithUpwardJumpsHasARoot) {
    // Psi(gamma) = gamma + 4 / (1 + gamma) - 4, root at gamma = 3
    const auto c = classify({-1.0, 0.0, {ExponentialPositive{4.0, 1.0}}});
    ASSERT_EQ(c.ruin_case, RuinCase::B);
    EXPECT_NEAR(c.rate, 3.0, 1e-9);
}

TEST(Classify, PerturbedIsCaseBAtClosedFormRoot) {
    const auto c = classify({2.0, 1.0, {ExponentialNegative{1.0, 1.0}}});
    ASSERT_EQ(c.ruin_case, RuinCase::B);
    EXPECT_NEAR(c.rate, (5.0 - std::sqrt(17.0)) / 2.0, 1e-9);
    const LaplaceExponent le({2.0, 1.0, {ExponentialNegative{1.0, 1.0}}});
    const double bisected = oracle::bisect([&](double g) { return le.psi(g); }, 0.1, 0.9);
    EXPECT_NEAR(c.rate, bisected, 1e-9);
    EXPECT_LE(c.root_residual, c.tol);
}

TEST(Classify, TemperedParetoIsCaseD) {
    const auto c = classify({1.0 + oracle::expint_n(2, 1.0), 0.0, {TemperedParetoNegative{1.0, 1.0, 3.0, 1.0}}});
    ASSERT_EQ(c.ruin_case, RuinCase::D);
    EXPECT_EQ(c.rate, 1.0);
    EXPECT_EQ(c.limit.status, LimitStatus::finite);
    EXPECT_LT(c.limit.value, 0.0);
}

TEST(Classify, TemperedParetoWithLargeScaleIsCaseB) {
    // enough tail mass that Psi becomes positive before gamma_c
    const LevyTriplet t{1.0 + 20.0 * oracle::expint_n(2, 1.0), 0.0, {TemperedParetoNegative{20.0, 1.0, 3.0, 1.0}}};
    const auto c = classify(t);
    ASSERT_EQ(c.ruin_case, RuinCase::B);
    EXPECT_LT(c.rate, 1.0);
    EXPECT_LE(std::fabs(LaplaceExponent(t).psi(c.rate)), c.tol);
}

TEST(FindRoot, ExponentialClaimsAnalyticRoot) {
    const auto r = find_root(LaplaceExponent({2.0, 0.0, {ExponentialNegative{1.0, 1.0}}}));
    ASSERT_TRUE(r.found);
    EXPECT_NEAR(r.gamma0, 1.0 - 1.0 / 2.0, 1e-10);
}

TEST(FindRoot, PerturbedMatchesBisectionOracle) {
    const LaplaceExponent le({2.0, 1.0, {ExponentialNegative{1.0, 1.0}}});
    const auto r = find_root(le);
    ASSERT_TRUE(r.found);
    EXPECT_NEAR(r.gamma0, oracle::bisect([&](double g) { return le.psi(g); }, 0.1, 0.9), 1e-9);
    EXPECT_LE(r.upper - r.lower, 1e-10 * std::max(1.0, r.gamma0));
    EXPECT_LE(r.residual, 1e-10);
}

TEST(FindRoot, BrownianWithDrift) {
    const auto r = find_root(LaplaceExponent({1.0, 2.0, {}}));
    ASSERT_TRUE(r.found);
    EXPECT_NEAR(r.gamma0, 2.0 * 1.0 / 2.0, 1e-10);
}

TEST(FindRoot, NoSignChangeBelowGammaC) {
    const auto r = find_root(LaplaceExponent({1.0 + oracle::expint_n(2, 1.0), 0.0, {TemperedParetoNegative{1.0, 1.0, 3.0, 1.0}}}));
    EXPECT_FALSE(r.found);
}

TEST(FindRoot, RootBelowInitialStep) {
    // gamma0 = 2 delta / sigma2 = 2e-12 < tol
    const auto r = find_root(LaplaceExponent({1e-12, 1.0, {}}));
    ASSERT_TRUE(r.found);
    EXPECT_LE(r.gamma0, 1e-10);
    EXPECT_LE(r.residual, 1e-10);
}

TEST(FindRoot, RequiresPositiveDrift) {
    EXPECT_THROW(find_root(LaplaceExponent({-1.0, 1.0, {}})), std::invalid_argument);
    EXPECT_THROW(find_root(LaplaceExponent({1.0, 1.0, {}}), 0.0), std::invalid_argument);
}

TEST(Bound, Examples) {
    EXPECT_NEAR(bound(RuinCase::B, 0.5, 2.0), 0.36787944117144233, 1e-16);
    EXPECT_NEAR(bound(RuinCase::D, 1.0, 3.0), std::exp(-3.0), 1e-17);
    EXPECT_EQ(bound(RuinCase::A, 0.0, 0.0), 1.0);
    EXPECT_EQ(bound(RuinCase::B, 0.5, 0.0), 1.0);
    EXPECT_EQ(bound(RuinCase::D, 1.0, 0.0), 1.0);
    EXPECT_EQ(bound(RuinCase::C, 0.0, 0.0), 0.0);
    EXPECT_THROW(bound(RuinCase::A, 0.0, -1.0), std::invalid_argument);
}

TEST(Bound, NonIncreasingAndInUnitInterval) {
    oracle::Draws d(31);
    for (int i = 0; i < 200; ++i) {
        const RuinCase c = static_cast<RuinCase>(d.integer(0, 3));
        const double rate = d.log_uniform(1e-3, 10.0);
        double prev = 1.0;
        for (int k = 0; k < 30; ++k) {
            const double b = bound(c, rate, 0.5 * k);
            EXPECT_GE(b, 0.0);
            EXPECT_LE(b, 1.0);
            EXPECT_LE(b, prev);
            prev = b;
        }
    }
}

TEST(Classify, ScalingMapsRateAndKeepsBound) {
    oracle::Draws d(32);
    for (int i = 0; i < 100; ++i) {
        const double beta = d.log_uniform(0.1, 5.0), alpha = d.log_uniform(0.1, 5.0);
        const double p = beta / alpha + d.log_uniform(0.05, 5.0), s2 = d.log_uniform(0.01, 5.0);
        const double c = d.log_uniform(0.2, 5.0), u = d.uniform(0.0, 5.0);
        const auto x = classify({p, s2, {ExponentialNegative{beta, alpha}}});
        const auto cx = classify({c * p, c * c * s2, {ExponentialNegative{beta, alpha / c}}});
        ASSERT_EQ(x.ruin_case, RuinCase::B);
        ASSERT_EQ(cx.ruin_case, RuinCase::B);
        // each root is bracketed to 1e-10 absolute
        EXPECT_NEAR(cx.rate, x.rate / c, 1e-10 * (1.0 + 1.0 / c));
        EXPECT_NEAR(bound(cx, c * u), bound(x, u), 1e-7);
    }
}

TEST(Classify, Deterministic) {
    oracle::Draws d(33);
    for (int i = 0; i < 50; ++i) {
        const auto t = testing_models::random_triplet(d);
        const auto a = classify(t), b = classify(t);
        EXPECT_EQ(summary_line(a), summary_line(b));
        EXPECT_EQ(report(a), report(b));
    }
}

TEST(Classify, GalleryCasesAndRootResiduals) {
    for (const auto& g : gallery()) {
        const auto c = classify(g.triplet);
        EXPECT_EQ(c.ruin_case, g.expected) << g.name;
        if (c.ruin_case == RuinCase::B) {
            EXPECT_GT(c.rate, 0.0);
            EXPECT_LT(c.rate, c.gamma_c);
            EXPECT_LE(std::fabs(LaplaceExponent(g.triplet).psi(c.rate)), c.tol) << g.name;
        }
        if (c.ruin_case == RuinCase::C) {
            EXPECT_EQ(g.triplet.sigma2, 0.0);
            EXPECT_FALSE(g.triplet.jumps.has_negative_jumps());
            EXPECT_GT(c.delta, 0.0);
        }
    }
}

TEST(Classify, RandomSweepIsExhaustive) {
    oracle::Draws d(34);
    std::map<RuinCase, int> seen;
    for (int i = 0; i < 1500; ++i) {
        const auto t = testing_models::random_triplet(d);
        RuinClassification c;
        ASSERT_NO_THROW(c = classify(t)) << describe(t);
        ++seen[c.ruin_case];
        switch (c.ruin_case) {
            case RuinCase::A: EXPECT_LE(c.delta, 0.0); break;
            case RuinCase::B:
                EXPECT_GT(c.rate, 0.0);
                EXPECT_LT(c.rate, c.gamma_c);
                EXPECT_TRUE(c.root_residual <= c.tol || !c.warnings.empty()) << describe(t);
                break;
            case RuinCase::C: EXPECT_TRUE(is_subordinator(t)); break;
            case RuinCase::D:
                EXPECT_TRUE(std::isfinite(c.gamma_c));
                EXPECT_LE(c.limit.value, 0.0);
                break;
        }
    }
    EXPECT_EQ(seen.size(), 4u);
}

TEST(Report, SummaryLineFormat) {
    EXPECT_EQ(summary_line(classify({3.0, 0.0, {}})), "case=C rate=0 delta=3 gamma_c=inf");
    EXPECT_EQ(summary_line(classify({1.0, 2.0, {}})), "case=B rate=1 delta=1 gamma_c=inf");
}
