#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "maxent/dra.hpp"
#include "maxent/entropy.hpp"
#include "maxent/error.hpp"
#include "maxent/product.hpp"
#include "maxent/simulate.hpp"
#include "oracles.hpp"

using namespace maxent;
using namespace maxent::testing;

namespace {

// One state, every word accepted.
Dra trivial_dra() {
    Dra d;
    d.state_names = {"q"};
    d.delta = {{0}};
    d.pairs = {{{}, {0}}};
    return d;
}

std::vector<int> accepting_states(const ConstrainedResult& r) {
    std::vector<int> B;
    for (int k : r.accepting)
        for (int s : r.synthesis.cls.mecs.mecs[k]) B.push_back(s);
    std::sort(B.begin(), B.end());
    return B;
}

// Product policy that copies the MDP policy at every memory state.
StationaryPolicy copy_policy(const ProductMdp& p, const StationaryPolicy& pol) {
    StationaryPolicy out;
    for (const auto& [s, q] : p.origin) out.dist.push_back(pol.dist[s]);
    return out;
}

}  // namespace

TEST(Product, TrivialAutomatonIsIsomorphic) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Mdp m = random_mdp(rng, 6, 3, 3);
        auto p = build_product(m, trivial_dra());
        ASSERT_EQ(p.mdp.num_states(), m.num_states());
        EXPECT_EQ(count_action_transitions(p.mdp), count_action_transitions(m));
        for (int s = 0; s < m.num_states(); ++s) {
            EXPECT_EQ(p.state_of(s, 0), s);
            EXPECT_EQ(p.mdp.state_name(s), m.state_name(s) + "|q");
        }
    }
}

TEST(Product, UnprunedHasAllPairs) {
    Mdp m = fig4a();
    Dra d = sequence_dra({"g"});
    ProductOptions o;
    o.prune = false;
    auto full = build_product(m, d, o);
    EXPECT_EQ(full.mdp.num_states(), 10);
    auto pruned = build_product(m, d);
    EXPECT_EQ(pruned.mdp.num_states(), 5);
    EXPECT_EQ(pruned.mdp.state_name(pruned.mdp.initial()), "s0|q0");
    EXPECT_GE(pruned.state_of(3, 1), 0);
    EXPECT_EQ(pruned.state_of(3, 0), -1);
}

TEST(Product, InitialStateReadsFirstLabel) {
    MdpBuilder b;
    b.set_ap({"g"});
    int s0 = b.state("s0", 1);
    b.self_loop(s0);
    auto p = build_product(b.build(), sequence_dra({"g"}));
    EXPECT_EQ(p.mdp.state_name(p.mdp.initial()), "s0|q1");
}

TEST(Product, AlphabetMismatch) {
    EXPECT_THROW(build_product(fig4a(), sequence_dra({"zzz"})), DomainError);
}

TEST(Product, PreservesReachProbability) {
    // Reaching "goal" in the MDP equals reaching the accepting memory state in
    // the product under the same memoryless policy.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Mdp m = random_layered_mdp(seed, 12, 4);
        auto pol = uniform_policy(m);
        std::vector<int> goal;
        for (int s = 0; s < m.num_states(); ++s)
            if (m.label(s) & 1) goal.push_back(s);
        double direct = reach_probability(induce_chain(m, pol), goal);
        auto p = build_product(m, sequence_dra({"goal"}));
        std::vector<int> acc;
        for (int i = 0; i < p.mdp.num_states(); ++i)
            if (p.origin[i].second == 1) acc.push_back(i);
        double lifted = reach_probability(induce_chain(p.mdp, copy_policy(p, pol)), acc);
        EXPECT_NEAR(direct, lifted, 1e-12) << seed;
    }
}

TEST(Product, GridStructure) {
    Mdp g = build_gridworld(reach_avoid_grid());
    Dra d = persistence_avoid_dra("T", "B");
    ProductOptions o;
    o.prune = false;
    auto full = build_product(g, d, o);
    EXPECT_EQ(full.mdp.num_states(), 484);
    auto dec = maximal_end_components(full.mdp);
    EXPECT_EQ(dec.mecs.size(), 10u);
    EXPECT_EQ(oracle::mecs(full.mdp).size(), 10u);
    auto acc = accepting_mecs(full, dec);
    ASSERT_EQ(acc.size(), 1u);
    EXPECT_EQ(dec.mecs[acc[0]], (std::vector<int>{full.state_of(g.find_state("10_5"), 2)}));
}

TEST(Constrained, Fig4aSureSatisfaction) {
    ConstrainedOptions o;
    o.beta = 1.0;
    auto r = synthesize_constrained(fig4a(), sequence_dra({"g"}), o);
    EXPECT_NEAR(r.synthesis.objective, 0.0, 1e-6);
    EXPECT_NEAR(r.beta_achieved, 1.0, 1e-9);
    EXPECT_TRUE(r.b_closed);
}

TEST(Constrained, Fig4aThirdMatchesUnconstrained) {
    ConstrainedOptions o;
    o.beta = 1.0 / 3;
    auto r = synthesize_constrained(fig4a(), sequence_dra({"g"}), o);
    EXPECT_NEAR(r.synthesis.objective, std::log2(3.0), 1e-5);
    EXPECT_GE(r.beta_achieved, 1.0 / 3 - 1e-6);
    EXPECT_TRUE(r.b_closed);
    const auto& pm = r.product;
    int s0 = pm.mdp.initial();
    EXPECT_NEAR(r.synthesis.policy.dist[s0][0], 2.0 / 3, 1e-3);
}

TEST(Constrained, BetaIsRespectedAcrossRandomModels) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        Mdp m = random_layered_mdp(seed, 12, 4);
        Dra d = sequence_dra({"goal"});
        double mr = max_satisfaction_probability(m, d);
        for (double beta : {0.2, 0.5, mr}) {
            if (beta > mr) continue;
            ConstrainedOptions o;
            o.beta = beta;
            auto r = synthesize_constrained(m, d, o);
            auto chain = induce_chain(r.product.mdp, r.synthesis.policy);
            auto B = accepting_states(r);
            EXPECT_GE(reach_probability(chain, B), beta - 1e-6) << seed << " " << beta;
            EXPECT_TRUE(closed_under(chain, B));
        }
    }
}

TEST(Constrained, BetaAboveMaximumIsRejected) {
    MdpBuilder b;
    b.set_ap({"g"});
    int s0 = b.state("s0"), s1 = b.state("s1", 1), s2 = b.state("s2");
    b.action(s0, "a1", {{s1, 0.5}, {s2, 0.5}});
    b.self_loop(s1);
    b.self_loop(s2);
    Mdp m = b.build();
    EXPECT_NEAR(max_satisfaction_probability(m, sequence_dra({"g"})), 0.5, 1e-8);
    ConstrainedOptions o;
    o.beta = 0.9;
    EXPECT_THROW(synthesize_constrained(m, sequence_dra({"g"}), o), DomainError);
}

TEST(Controller, MemoryUpdatesFollowLabels) {
    ConstrainedOptions o;
    o.beta = 1.0 / 3;
    auto r = synthesize_constrained(fig4a(), sequence_dra({"g"}), o);
    const auto& c = r.controller;
    EXPECT_EQ(c.initial_memory(), 0);
    EXPECT_EQ(c.update(0, 3), 1);
    EXPECT_EQ(c.update(0, 4), 0);
    EXPECT_EQ(c.update(1, 4), 1);
    EXPECT_TRUE(c.defined(0, 0));
    EXPECT_FALSE(c.defined(0, 1));
    auto dist = c.distribution(0, 0);
    EXPECT_NEAR(dist[0], 2.0 / 3, 1e-3);
    EXPECT_FALSE(c.deterministic());
}

TEST(Controller, SimulatedSatisfactionWithinThreeSigma) {
    Mdp m = fig4a();
    ConstrainedOptions o;
    o.beta = 0.5;
    auto r = synthesize_constrained(m, sequence_dra({"g"}), o);
    auto B = accepting_states(r);
    auto sim = simulate_controller(m, r.controller, B, 10000, 100, 12345);
    double p = r.beta_achieved;
    double sigma = std::sqrt(p * (1 - p) / 10000);
    EXPECT_NEAR(sim.frequency, p, 3 * sigma + 1e-12);
    EXPECT_GE(p, 0.5 - 1e-6);
}

TEST(Controller, GridRunsStayOffObstacles) {
    Mdp g = build_gridworld(reach_avoid_grid());
    ConstrainedOptions o;
    o.beta = 1.0;
    o.gamma = 20.0;
    auto r = synthesize_constrained(g, persistence_avoid_dra("T", "B"), o);
    EXPECT_GE(r.beta_achieved, 1.0 - 1e-6);
    EXPECT_TRUE(r.b_closed);
    auto B = accepting_states(r);
    auto sim = simulate_controller(g, r.controller, B, 500, 2000, 99, 20);
    EXPECT_EQ(sim.satisfied, 500);
    for (const auto& run : sim.kept)
        for (int s : run.states) EXPECT_EQ(g.label(s) & 1u, 0u) << g.state_name(s);  // bit 0 is "B"
}
