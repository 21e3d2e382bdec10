#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "maxent/error.hpp"
#include "maxent/synthesis.hpp"
#include "oracles.hpp"

using namespace maxent;
using namespace maxent::testing;

TEST(Synthesis, TwoDeterministicBranches) {
    auto r = synthesize_max_entropy(fig1a());
    EXPECT_EQ(r.cls.tag, EntropyTag::Finite);
    EXPECT_EQ(r.solution.status, SolveStatus::Optimal);
    EXPECT_NEAR(r.policy.dist[0][0], 0.5, 1e-6);
    EXPECT_NEAR(r.policy.dist[0][1], 0.5, 1e-6);
    EXPECT_NEAR(r.objective, 1.0, 1e-6);
    EXPECT_NEAR(r.achieved_entropy, 1.0, 1e-6);
}

TEST(Synthesis, SelfLoopBranchOptimum) {
    // H(p/3, 2p/3, 1-p) / (1 - p/3) peaks at p = 3/4 with exactly 2 bits.
    auto r = synthesize_max_entropy(fig1b());
    EXPECT_NEAR(r.policy.dist[0][0], 0.75, 1e-5);
    EXPECT_NEAR(r.objective, 2.0, 1e-6);
    std::vector<double> best;
    double grid = oracle::grid_search_entropy(fig1b(), 1e-3, &best);
    EXPECT_NEAR(best[0], 0.75, 1e-3);
    EXPECT_GE(r.objective, grid - 1e-6);
    EXPECT_LE(r.objective, grid + 1e-4);
}

TEST(Synthesis, UniformPathsOnFig4a) {
    auto r = synthesize_max_entropy(fig4a());
    EXPECT_NEAR(r.policy.dist[0][0], 2.0 / 3, 1e-5);
    EXPECT_NEAR(r.policy.dist[1][0], 0.5, 1e-5);
    EXPECT_NEAR(r.objective, std::log2(3.0), 1e-6);
    auto c = induce_chain(fig4a(), r.policy);
    auto paths = oracle::enumerate_paths(c, 1e-12);
    EXPECT_NEAR(paths.absorbed, 1.0, 1e-12);
    for (auto path : {std::vector<int>{0, 1, 3}, std::vector<int>{0, 1, 4}, std::vector<int>{0, 2, 4}})
        EXPECT_NEAR(path_prefix_probability(c, path), 1.0 / 3, 1e-6);
}

TEST(Synthesis, UnboundedNeedsEllOrGamma) {
    EXPECT_THROW(synthesize_max_entropy(fig2a()), DomainError);
}

TEST(Synthesis, UnboundedWithGammaMatchesClosedForm) {
    // Occupancy of s0 is 1/delta and the entropy H(delta)/delta falls with
    // delta, so the cap binds at delta = 1/gamma.
    for (double gamma : {2.0, 10.0, 50.0}) {
        SynthesisOptions o;
        o.gamma = gamma;
        auto r = synthesize_max_entropy(fig2a(), o);
        EXPECT_NEAR(r.objective, loop_chain_entropy(1.0 / gamma), 1e-5) << gamma;
        EXPECT_NEAR(r.policy.dist[0][1], 1.0 / gamma, 1e-6) << gamma;
    }
}

TEST(Synthesis, UnboundedWithEllFloor) {
    for (double ell : {3.0, 10.0}) {
        SynthesisOptions o;
        o.ell = ell;
        auto r = synthesize_max_entropy(fig2a(), o);
        EXPECT_GE(r.achieved_entropy, ell - 1e-3);
        EXPECT_TRUE(std::isfinite(r.achieved_entropy));
    }
}

TEST(Synthesis, InfiniteClass) {
    auto r = synthesize_max_entropy(fig2b());
    EXPECT_EQ(r.cls.tag, EntropyTag::Infinite);
    EXPECT_TRUE(std::isinf(r.achieved_entropy));
    EXPECT_TRUE(validate_policy(fig2b(), r.policy).ok());
}

TEST(Synthesis, ObjectiveMatchesReevaluation) {
    std::mt19937_64 rng(53);
    int seen = 0;
    for (int trial = 0; trial < 400 && seen < 25; ++trial) {
        Mdp m = random_mdp(rng, 3 + trial % 5, 3, 3);
        if (classify_max_entropy(m).tag != EntropyTag::Finite) continue;
        ++seen;
        auto r = synthesize_max_entropy(m);
        EXPECT_TRUE(validate_policy(m, r.policy).ok());
        EXPECT_NEAR(r.objective, oracle::chain_entropy(induce_chain(m, r.policy)), 1e-4 * std::max(1.0, r.objective));
        EXPECT_LE(r.solution.gap, 1e-6);
    }
    EXPECT_GT(seen, 10);
}

TEST(Synthesis, DominatesCoarseGridSearch) {
    std::mt19937_64 rng(59);
    int seen = 0;
    for (int trial = 0; trial < 300 && seen < 8; ++trial) {
        Mdp m = random_mdp(rng, 3, 2, 3);
        if (classify_max_entropy(m).tag != EntropyTag::Finite) continue;
        ++seen;
        auto r = synthesize_max_entropy(m);
        EXPECT_GE(r.objective, oracle::grid_search_entropy(m, 0.05) - 1e-6);
    }
    EXPECT_GT(seen, 3);
}

TEST(Synthesis, RandomPoliciesNeverBeatOptimum) {
    std::mt19937_64 rng(61);
    Mdp m = fig4a();
    auto r = synthesize_max_entropy(m);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        double p = u(rng), q = u(rng);
        StationaryPolicy pol{{{p, 1 - p}, {q, 1 - q}, {1.0}, {1.0}, {1.0}}};
        EXPECT_LE(chain_entropy(induce_chain(m, pol)), r.objective + 1e-7);
    }
}

TEST(Program, RejectsBadOptions) {
    Mdp m = fig2a();
    std::vector<int> C{1};
    Mdp abs = absorb_states(m, C);
    ProgramOptions po;
    po.objective = ProgramObjective::Feasibility;
    EXPECT_THROW(build_program(abs, C, po), DomainError);
    ProgramOptions g;
    g.gamma = -1.0;
    EXPECT_THROW(build_program(abs, C, g), DomainError);
    std::vector<int> not_absorbing{0};
    EXPECT_THROW(build_program(m, not_absorbing, {}), DomainError);
}

TEST(Program, InfeasibleEllUnderGamma) {
    // With occupancy at most 2, entropy of the loop chain is at most 2 bits.
    Mdp m = fig2a();
    std::vector<int> C{1};
    Mdp abs = absorb_states(m, C);
    ProgramOptions po;
    po.gamma = 2.0;
    po.ell = 5.0;
    auto sol = solve_program(build_program(abs, C, po));
    EXPECT_EQ(sol.status, SolveStatus::Infeasible);
}

TEST(MinTime, GridMatchesValueIteration) {
    Mdp m = build_gridworld(reach_avoid_grid());
    int t = m.find_state("10_5");
    std::vector<int> C;
    for (int s = 0; s < m.num_states(); ++s)
        if (m.label(s) != 0) C.push_back(s);
    std::vector<int> B{t};
    double lp = min_expected_time(m, C, 1.0, B);
    double vi = oracle::min_time_vi(m, {t})[m.initial()];
    EXPECT_NEAR(lp, vi, 1e-5);
}

TEST(MinTime, BetaAboveReachRejected) {
    Mdp m = fig4a();
    std::vector<int> C{3, 4};
    std::vector<int> B{3};
    EXPECT_NEAR(min_expected_time(m, C, 1.0, B), 2.0, 1e-6);
    MdpBuilder b;
    int s0 = b.state("s0"), s1 = b.state("s1"), s2 = b.state("s2");
    b.action(s0, "a1", {{s1, 0.5}, {s2, 0.5}});
    b.self_loop(s1);
    b.self_loop(s2);
    Mdp half = b.build();
    std::vector<int> C2{1, 2}, B2{1};
    EXPECT_THROW(min_expected_time(half, C2, 0.9, B2), DomainError);
    EXPECT_NEAR(min_expected_time(half, C2, 0.5, B2), 1.0, 1e-6);
}
