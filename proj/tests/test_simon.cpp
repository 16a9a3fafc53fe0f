#include "qenergy/gf2.hpp"
#include "qenergy/simon.hpp"
#include "qenergy/stats.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace qenergy;
using namespace qenergy::simon;

TEST(Gf2, RrefIsOrderIndependent) {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const unsigned n = 1 + static_cast<unsigned>(rng.below(10));
        std::vector<word> v;
        const std::size_t k = rng.below(2 * n);
        for (std::size_t j = 0; j < k; ++j) v.push_back(static_cast<word>(rng.below(1u << n)));
        auto shuffled = v;
        rng.shuffle(shuffled);
        EXPECT_EQ(gf2::rref(v, n), gf2::rref(shuffled, n));
    }
}

TEST(Gf2, KernelVectorIsOrthogonalAndNonzero) {
    Rng rng(2);
    for (int i = 0; i < 500; ++i) {
        const unsigned n = 1 + static_cast<unsigned>(rng.below(12));
        std::vector<word> v;
        const std::size_t k = rng.below(n + 2);
        for (std::size_t j = 0; j < k; ++j) v.push_back(static_cast<word>(rng.below(1u << n)));
        const auto s = gf2::kernel_vector(v, n);
        if (gf2::rank(v, n) == n) {
            EXPECT_FALSE(s);
            continue;
        }
        ASSERT_TRUE(s);
        EXPECT_NE(*s, 0u);
        EXPECT_LT(*s, 1u << n);
        for (word y : v) EXPECT_EQ(gf2::dot(y, *s), 0);
    }
}

TEST(Gf2, RankByBruteForceSpan) {
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const unsigned n = 1 + static_cast<unsigned>(rng.below(6));
        std::vector<word> v;
        for (std::size_t j = 0; j < rng.below(6); ++j) v.push_back(static_cast<word>(rng.below(1u << n)));
        std::set<word> span{0};
        for (word y : v) {
            std::set<word> next = span;
            for (word s : span) next.insert(s ^ y);
            span = next;
        }
        EXPECT_EQ(std::size_t{1} << gf2::rank(v, n), span.size());
    }
}

TEST(Instance, SampledInstancesKeepThePromise) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const unsigned n = 1 + static_cast<unsigned>(rng.below(8));
        const auto inst = sample_uniform_instance(n, rng);
        EXPECT_NO_THROW(inst.validate());
        if (inst.b == 1) {
            for (word x = 0; x < inst.domain(); ++x) EXPECT_EQ(inst(x), inst(x ^ inst.s));
        }
    }
}

TEST(Instance, ValidationCatchesBrokenPromises) {
    SimonInstance inst{2, 0, 0, {0, 1, 2, 2}};
    EXPECT_THROW(inst.validate(), ValidationError);
    SimonInstance two{2, 1, 1, {0, 0, 1, 2}};
    EXPECT_THROW(two.validate(), ValidationError);
    SimonInstance good{2, 1, 1, {3, 3, 1, 1}};
    EXPECT_NO_THROW(good.validate());
    EXPECT_THROW(check_size(0), ValidationError);
    EXPECT_THROW(check_size(21), ValidationError);
}

TEST(Feistel, IsAPermutation) {
    const PRPConfig cfg;
    for (unsigned n = 1; n <= 12; ++n) {
        const Feistel f(n, cfg);
        std::vector<bool> hit(std::size_t{1} << n, false);
        for (word x = 0; x < hit.size(); ++x) {
            const word y = f(x);
            ASSERT_LT(y, hit.size());
            ASSERT_FALSE(hit[y]);
            hit[y] = true;
        }
    }
}

TEST(Feistel, KeyChangesThePermutation) {
    const Feistel a(8, PRPConfig{}), b(8, PRPConfig{"1111000011110000", 8});
    int differ = 0;
    for (word x = 0; x < 256; ++x) differ += a(x) != b(x);
    EXPECT_GT(differ, 200);
}

TEST(Feistel, RejectsBadConfig) {
    EXPECT_THROW(Feistel(4, PRPConfig{"01x", 8}), ValidationError);
    EXPECT_THROW(Feistel(4, PRPConfig{"01", 3}), ValidationError);
}

TEST(Prp, InstancesKeepThePromise) {
    const PRPConfig cfg;
    for (unsigned n = 2; n <= 10; ++n) {
        EXPECT_NO_THROW(prp_instance(n, 0, 0, cfg));
        EXPECT_NO_THROW(prp_instance(n, 1, 1, cfg));
        EXPECT_NO_THROW(prp_instance(n, 1, (word{1} << n) - 1, cfg));
    }
    EXPECT_THROW(prp_instance(3, 1, 0, cfg), ValidationError);
}

TEST(Queries, RepeatedInputIsRejected) {
    Rng rng(4);
    const auto inst = sample_instance(3, 0, rng);
    QueryLog log;
    classical_query(inst, 5, log);
    EXPECT_THROW(classical_query(inst, 5, log), std::domain_error);
    EXPECT_THROW(classical_query(inst, 8, log), std::out_of_range);
}

TEST(Queries, DistinctInputsAreDistinct) {
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto xs = distinct_inputs(6, rng.below(65), rng);
        std::set<word> s(xs.begin(), xs.end());
        EXPECT_EQ(s.size(), xs.size());
        for (word x : xs) EXPECT_LT(x, 64u);
    }
}

TEST(FourierTwice, SamplesAreOrthogonalToTheShift) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        const unsigned n = 2 + static_cast<unsigned>(rng.below(5));
        const auto inst = sample_instance(n, 1, rng);
        const FourierTwice ft(inst);
        for (std::size_t y = 0; y < ft.input_marginal().size(); ++y)
            if (ft.input_marginal()[y] > 0.0) {
                EXPECT_EQ(gf2::dot(static_cast<word>(y), inst.s), 0);
            }
        for (int k = 0; k < 50; ++k) EXPECT_EQ(gf2::dot(ft.sample(rng), inst.s), 0);
    }
}

TEST(FourierTwice, OneToOneGivesUniformSamples) {
    Rng rng(6);
    const auto inst = sample_instance(4, 0, rng);
    const FourierTwice ft(inst);
    for (double p : ft.input_marginal()) EXPECT_NEAR(p, 1.0 / 16.0, 1e-12);
}

TEST(FourierTwice, TwoToOneGivesUniformOverOrthogonalComplement) {
    Rng rng(7);
    const auto inst = sample_instance(5, 1, rng);
    const FourierTwice ft(inst);
    for (std::size_t y = 0; y < 32; ++y)
        EXPECT_NEAR(ft.input_marginal()[y], gf2::dot(static_cast<word>(y), inst.s) ? 0.0 : 1.0 / 16.0, 1e-12);
}

TEST(QuantumSolve, AnswersAndCountsQueries) {
    Rng rng(8);
    int correct = 0;
    for (int i = 0; i < 200; ++i) {
        const auto inst = sample_uniform_instance(4, rng);
        const auto r = quantum_solve(inst, default_rounds(4), rng);
        correct += r.a == inst.b;
        EXPECT_EQ(r.m_used, r.rank == 4 ? 14u : 16u);
        if (inst.b == 0) {
            EXPECT_EQ(r.a, 0);
        }
    }
    EXPECT_GE(correct, 195);
}

TEST(ClassicalSolve, NeverClaimsCollisionOnPermutations) {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const auto inst = sample_instance(5, 0, rng);
        EXPECT_EQ(classical_solve(inst, 20, rng).a, 0);
    }
}

TEST(ClassicalSolve, AllQueriesFindTheCollision) {
    Rng rng(10);
    const auto inst = sample_instance(4, 1, rng);
    EXPECT_EQ(classical_solve(inst, 16, rng).a, 1);
    EXPECT_THROW(classical_solve(inst, 17, rng), std::invalid_argument);
}

TEST(Bounds, OptimalDeltaMaximizesTheCoefficient) {
    auto coeff = [](double d) { return (1 - 6 * d) / (6 - 12 * d) * std::sqrt(2 * d / (1 + d)); };
    double best = 0, arg = 0;
    for (int i = 1; i < 166666; ++i) {
        const double d = i * 1e-6;
        if (coeff(d) > best) {
            best = coeff(d);
            arg = d;
        }
    }
    EXPECT_NEAR(optimal_delta(), arg, 1e-4);
    EXPECT_NEAR(optimal_delta(), 0.0635083269, 1e-9);
}

TEST(Bounds, MLowerFrozenValues) {
    EXPECT_EQ(m_lower(10, {0.1667, 1.0 / 3.0}), 18u);
    // sqrt(2D/(1+D)) 2^25 with D = 2 - sqrt(15)/2, ceiling of 11596041.95
    EXPECT_EQ(m_lower(50, {optimal_delta(), 1.0 / 3.0}), 11596042u);
    EXPECT_NEAR(m_lower_real(50, optimal_delta()), 0.34558898 * std::exp2(25.0), 1.0);
}

TEST(Bounds, QueryCountFrozenValues) {
    EXPECT_EQ(prop3_queries(10, {1.0 / 6.0, 1.0 / 3.0}), 48u);  // 47.936
    EXPECT_EQ(prop3_queries(10, {1.0 / 6.0, 0.3333}), 48u);
    EXPECT_EQ(prop3_queries_capped(2, {1.0 / 6.0, 1.0 / 3.0}), 4u);
    EXPECT_LE(prop3_failure_bound(10, 48), 1.0 / 3.0);
}

TEST(Bounds, FailureBoundHoldsAtTheQueryCount) {
    for (unsigned n = 1; n <= 30; ++n)
        for (double d : {0.5, 1.0 / 3.0, 0.1, 0.01}) {
            const auto m = prop3_queries(n, {1.0 / 6.0, d});
            EXPECT_LE(prop3_failure_bound(n, m), d + 1e-12);
        }
}

TEST(Bounds, SuccessCeilingFrozenValue) {
    // 1/2 + M^2 / (2^(N+1) - M^2) at N = 10, M = 18
    const auto c = prop1_success_ceiling(10, 18);
    EXPECT_NEAR(c.value, 0.5 + 324.0 / (2048.0 - 324.0), 1e-15);
    EXPECT_NEAR(c.value, 0.687935034802784, 1e-12);
    EXPECT_FALSE(c.saturated);
    EXPECT_TRUE(prop1_success_ceiling(4, 6).saturated);
}

TEST(Bounds, SuccessCeilingBelowTwoThirdsUnderMLower) {
    for (unsigned n = 2; n <= 40; ++n) {
        const auto ml = m_lower(n, {1.0 / 6.0, 1.0 / 3.0});
        if (ml < 2) continue;
        EXPECT_LE(prop1_success_ceiling(n, ml - 1).value, 2.0 / 3.0 + 1e-12) << n;
    }
}

TEST(Bounds, QueryFloorFrozenValue) {
    const BoundParams p{optimal_delta(), 1.0 / 3.0};
    const double d = optimal_delta();
    EXPECT_NEAR(lemma1_floor(p), (1 - 6 * d) / (3 - 6 * d), 1e-15);
    EXPECT_NEAR(lemma1_floor(p), 0.2363352, 1e-7);
    EXPECT_THROW(lemma1_floor({1.0 / 6.0, 1.0 / 3.0}), ValidationError);
}

TEST(Stats, WilsonLowerIsBelowTheRate) {
    EXPECT_LT(stats::wilson_lower(90, 100), 0.9);
    EXPECT_NEAR(stats::wilson_lower(0, 100), 0.0, 1e-12);
    EXPECT_GT(stats::wilson_lower(500, 500), 0.98);
}

TEST(Stats, LogLogSlopeOfPowerLaw) {
    std::vector<double> x{1, 2, 4, 8}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
    EXPECT_NEAR(stats::loglog_slope(x, y), -1.5, 1e-12);
}
