#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "maxent/error.hpp"
#include "maxent/gridworld.hpp"
#include "maxent/io.hpp"
#include "maxent/mdp.hpp"
#include "oracles.hpp"

using namespace maxent;
using namespace maxent::testing;

namespace {

double outcome(const Mdp& m, int s, const std::string& action, int t) {
    for (const auto& a : m.actions(s))
        if (a.name == action)
            for (const auto& o : a.outcomes)
                if (o.target == t) return o.prob;
    return 0.0;
}

int action_index(const Mdp& m, int s, const std::string& name) {
    for (int a = 0; a < m.num_actions(s); ++a)
        if (m.actions(s)[a].name == name) return a;
    return -1;
}

}  // namespace

TEST(Validate, AcceptsSmallModels) {
    for (const Mdp& m : {fig1a(), fig1b(), fig2a(), fig2b(), fig4a()}) EXPECT_TRUE(validate_mdp(m).ok());
}

TEST(Validate, ReportsEachProblem) {
    MdpBuilder b;
    int s0 = b.state("s0"), s1 = b.state("s1");
    b.state("orphan");
    b.action(s0, "a1", {{s1, 0.6}, {s0, 0.3}});
    b.action(s1, "a1", {{s1, 1.2}});
    auto rep = validate_mdp(b.build());
    ASSERT_FALSE(rep.ok());
    auto has = [&](const std::string& needle) {
        for (const auto& v : rep.violations)
            if (v.find(needle) != std::string::npos) return true;
        return false;
    };
    EXPECT_TRUE(has("row-stochasticity"));
    EXPECT_TRUE(has("probability outside [0,1]"));
    EXPECT_TRUE(has("no actions at state orphan"));
}

TEST(Validate, UnreachableState) {
    MdpBuilder b;
    int s0 = b.state("s0"), s1 = b.state("s1");
    b.self_loop(s0);
    b.self_loop(s1);
    auto rep = validate_mdp(b.build());
    ASSERT_FALSE(rep.ok());
    EXPECT_NE(rep.violations.front().find("unreachable state s1"), std::string::npos);
}

TEST(Validate, InitialOutOfRange) {
    MdpBuilder b;
    b.self_loop(b.state("s0"));
    EXPECT_FALSE(validate_mdp(b.build(3)).ok());
}

TEST(Policy, ValidationAndInducedChain) {
    Mdp m = fig1b();
    StationaryPolicy pol{{{0.25, 0.75}, {1.0}, {1.0}}};
    EXPECT_TRUE(validate_policy(m, pol).ok());
    auto c = induce_chain(m, pol);
    EXPECT_NEAR(c.prob(0, 0), 0.25 / 3, 1e-15);
    EXPECT_NEAR(c.prob(0, 1), 0.25 * 2 / 3, 1e-15);
    EXPECT_NEAR(c.prob(0, 2), 0.75, 1e-15);
    EXPECT_DOUBLE_EQ(c.prob(1, 1), 1.0);

    StationaryPolicy bad{{{0.5, 0.6}, {1.0}, {1.0}}};
    EXPECT_FALSE(validate_policy(m, bad).ok());
    EXPECT_THROW(induce_chain(m, bad), DomainError);
    StationaryPolicy short_pol{{{1.0, 0.0}}};
    EXPECT_THROW(induce_chain(m, short_pol), DomainError);
}

TEST(Policy, InducedRowsSumToOne) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        Mdp m = random_mdp(rng, 6, 3, 3);
        StationaryPolicy pol;
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int s = 0; s < m.num_states(); ++s) {
            std::vector<double> w(m.num_actions(s));
            double tot = 0;
            for (auto& x : w) tot += x = u(rng) + 1e-3;
            for (auto& x : w) x /= tot;
            pol.dist.push_back(w);
        }
        auto c = induce_chain(m, pol);
        for (int s = 0; s < c.num_states(); ++s) {
            double tot = 0;
            int prev = -1;
            for (const auto& o : c.row(s)) {
                EXPECT_GT(o.target, prev);
                EXPECT_GT(o.prob, 0.0);
                prev = o.target;
                tot += o.prob;
            }
            EXPECT_NEAR(tot, 1.0, 1e-12);
        }
    }
}

TEST(Policy, DeterministicAndUniform) {
    Mdp m = fig4a();
    std::vector<int> choice{1, 0, 0, 0, 0};
    auto d = deterministic_policy(m, choice);
    EXPECT_EQ(d.dist[0], (std::vector<double>{0.0, 1.0}));
    auto u = uniform_policy(m);
    EXPECT_EQ(u.dist[1], (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(u.dist[3], (std::vector<double>{1.0}));
}

TEST(PathPrefix, Probability) {
    auto c = induce_chain(fig1b(), StationaryPolicy{{{0.5, 0.5}, {1.0}, {1.0}}});
    std::vector<int> p{0, 0, 1};
    EXPECT_NEAR(path_prefix_probability(c, p), (1.0 / 6) * (1.0 / 3), 1e-15);
    std::vector<int> impossible{0, 1, 0};
    EXPECT_EQ(path_prefix_probability(c, impossible), 0.0);
    std::vector<int> wrong_start{1, 1};
    EXPECT_THROW(path_prefix_probability(c, wrong_start), DomainError);
    EXPECT_THROW(path_prefix_probability(c, std::vector<int>{}), DomainError);
}

TEST(Json, RoundTrip) {
    for (const Mdp& m : {fig1b(), fig4a(), build_gridworld(reach_avoid_grid())}) {
        Mdp back = mdp_from_json(Json::parse(mdp_to_json(m).dump()));
        ASSERT_EQ(back.num_states(), m.num_states());
        EXPECT_EQ(back.initial(), m.initial());
        EXPECT_EQ(back.ap(), m.ap());
        EXPECT_EQ(back.labels(), m.labels());
        for (int s = 0; s < m.num_states(); ++s) {
            ASSERT_EQ(back.num_actions(s), m.num_actions(s));
            for (int a = 0; a < m.num_actions(s); ++a) {
                EXPECT_EQ(back.actions(s)[a].name, m.actions(s)[a].name);
                const auto& x = back.actions(s)[a].outcomes;
                const auto& y = m.actions(s)[a].outcomes;
                ASSERT_EQ(x.size(), y.size());
                for (std::size_t i = 0; i < x.size(); ++i) {
                    EXPECT_EQ(x[i].target, y[i].target);
                    EXPECT_EQ(x[i].prob, y[i].prob);
                }
            }
        }
    }
}

TEST(Json, RejectsMalformed) {
    Json j = mdp_to_json(fig1a());
    Json no_tag = j;
    no_tag.erase("format");
    EXPECT_THROW(mdp_from_json(no_tag), DomainError);
    Json bad_state = j;
    bad_state["transitions"].push_back({"nowhere", "a1", "s1", 1.0});
    EXPECT_THROW(mdp_from_json(bad_state), DomainError);
    Json bad_sum = j;
    bad_sum["transitions"][0][3] = 0.5;
    // Structurally fine; the semantic check belongs to validate_mdp.
    EXPECT_FALSE(validate_mdp(mdp_from_json(bad_sum)).ok());
    Json dup = j;
    dup["states"].push_back("s0");
    EXPECT_THROW(mdp_from_json(dup), DomainError);
}

TEST(Json, PolicyRoundTrip) {
    Mdp m = fig1b();
    StationaryPolicy pol{{{0.75, 0.25}, {1.0}, {1.0}}};
    auto back = policy_from_json(m, policy_to_json(m, pol));
    EXPECT_EQ(back.dist, pol.dist);
}

TEST(Json, DataFilesLoad) {
    const std::filesystem::path dir = MAXENT_DATA_DIR;
    for (const char* f : {"fig1a.json", "fig1b.json", "fig2a.json", "fig2b.json", "fig4a.json", "grid11.json"}) {
        Mdp m = load_model((dir / f).string());
        EXPECT_TRUE(validate_mdp(m).ok()) << f;
    }
    EXPECT_EQ(load_model((dir / "grid11.json").string()).num_states(), 121);
}

TEST(FormatFloat, TwelveSignificantDigits) {
    EXPECT_EQ(format_float(1.0 / 3), "0.333333333333");
    EXPECT_EQ(format_float(1.0), "1");
    EXPECT_EQ(format_float(std::numeric_limits<double>::infinity()), "inf");
}

TEST(Gridworld, InteriorMove) {
    GridWorldSpec g;
    g.width = 3;
    g.height = 3;
    g.initial = {1, 1};
    Mdp m = build_gridworld(g);
    int c = m.find_state("1_1");
    EXPECT_NEAR(outcome(m, c, "up", m.find_state("1_2")), 0.7, 1e-15);
    EXPECT_NEAR(outcome(m, c, "up", m.find_state("0_2")), 0.15, 1e-15);
    EXPECT_NEAR(outcome(m, c, "up", m.find_state("2_2")), 0.15, 1e-15);
    EXPECT_EQ(action_index(m, c, "left"), 0);
}

TEST(Gridworld, WallRule) {
    GridWorldSpec g;
    g.width = 3;
    g.height = 3;
    g.initial = {1, 2};
    Mdp m = build_gridworld(g);
    int c = m.find_state("1_2");
    // Moving off the top edge: stay w.p. 0.7, slip beside the current cell.
    EXPECT_NEAR(outcome(m, c, "up", c), 0.7, 1e-15);
    EXPECT_NEAR(outcome(m, c, "up", m.find_state("0_2")), 0.15, 1e-15);
    EXPECT_NEAR(outcome(m, c, "up", m.find_state("2_2")), 0.15, 1e-15);
}

TEST(Gridworld, CornerFoldsSlipMass) {
    GridWorldSpec g;
    g.width = 2;
    g.height = 2;
    g.initial = {0, 0};
    Mdp m = build_gridworld(g);
    int c = m.find_state("0_0");
    // Right to (1,0): the slip cells beside the target are (1,1) and (1,-1).
    EXPECT_NEAR(outcome(m, c, "right", m.find_state("1_0")), 0.85, 1e-15);
    EXPECT_NEAR(outcome(m, c, "right", m.find_state("1_1")), 0.15, 1e-15);
}

TEST(Gridworld, LateralModel) {
    GridWorldSpec g;
    g.width = 3;
    g.height = 3;
    g.initial = {1, 1};
    g.slip_model = SlipModel::Lateral;
    Mdp m = build_gridworld(g);
    int c = m.find_state("1_1");
    EXPECT_NEAR(outcome(m, c, "up", m.find_state("0_1")), 0.15, 1e-15);
    EXPECT_NEAR(outcome(m, c, "up", m.find_state("2_1")), 0.15, 1e-15);
}

TEST(Gridworld, WallsAndAbsorbing) {
    GridWorldSpec g;
    g.width = 3;
    g.height = 1;
    g.initial = {0, 0};
    g.walls = {{1, 0}};
    g.absorbing = {{2, 0}};
    g.labels["goal"] = {{2, 0}};
    Mdp m = build_gridworld(g);
    EXPECT_EQ(m.num_states(), 2);
    EXPECT_EQ(m.find_state("1_0"), -1);
    int e = m.find_state("2_0");
    for (const auto& a : m.actions(e)) {
        ASSERT_EQ(a.outcomes.size(), 1u);
        EXPECT_EQ(a.outcomes[0].target, e);
    }
    EXPECT_EQ(m.label(e), 1u);
    EXPECT_NEAR(outcome(m, 0, "right", 0), 1.0, 1e-15);
}

TEST(Gridworld, Rejections) {
    GridWorldSpec g;
    g.width = 2;
    g.height = 2;
    g.initial = {5, 0};
    EXPECT_THROW(build_gridworld(g), DomainError);
    g.initial = {0, 0};
    g.p_main = 0.8;
    EXPECT_THROW(build_gridworld(g), DomainError);
    g.p_main = 0.7;
    g.walls = {{0, 0}};
    EXPECT_THROW(build_gridworld(g), DomainError);
}

TEST(Gridworld, EveryRowStochastic) {
    Mdp m = build_gridworld(reach_avoid_grid());
    EXPECT_EQ(m.num_states(), 121);
    EXPECT_EQ(m.ap(), (std::vector<std::string>{"B", "T"}));
    EXPECT_TRUE(validate_mdp(m).ok());
}

TEST(Gridworld, JsonRoundTrip) {
    GridWorldSpec g = reach_avoid_grid();
    GridWorldSpec back = gridworld_from_json(gridworld_to_json(g));
    EXPECT_EQ(back.width, g.width);
    EXPECT_EQ(back.initial, g.initial);
    EXPECT_EQ(back.absorbing, g.absorbing);
    EXPECT_EQ(back.labels, g.labels);
    EXPECT_EQ(mdp_to_json(build_gridworld(back)), mdp_to_json(build_gridworld(g)));
}

TEST(Gridworld, MinTimeOracleAgreesAcrossSlipModels) {
    // The diagonal model lets slips help; it is never slower than lateral.
    for (SlipModel sm : {SlipModel::Diagonal, SlipModel::Lateral}) {
        Mdp m = build_gridworld(reach_avoid_grid(sm));
        int t = m.find_state("10_5");
        auto v = oracle::min_time_vi(m, {t});
        EXPECT_TRUE(std::isfinite(v[m.initial()]));
        EXPECT_GT(v[m.initial()], 10.0);
    }
}
