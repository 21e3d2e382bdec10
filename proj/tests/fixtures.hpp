#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "maxent/gridworld.hpp"
#include "maxent/mdp.hpp"

namespace maxent::testing {

class MdpBuilder {
public:
    int state(const std::string& name, LabelSet label = 0) {
        names_.push_back(name);
        labels_.push_back(label);
        actions_.emplace_back();
        return static_cast<int>(names_.size()) - 1;
    }
    void action(int s, const std::string& name, std::initializer_list<std::pair<int, double>> outs) {
        Action a{name, {}};
        for (auto [t, p] : outs) a.outcomes.push_back({t, p});
        actions_[s].push_back(std::move(a));
    }
    void self_loop(int s, const std::string& name = "a1") { action(s, name, {{s, 1.0}}); }
    void set_ap(std::vector<std::string> ap) { ap_ = std::move(ap); }
    Mdp build(int initial = 0) const { return Mdp(names_, initial, ap_, labels_, actions_); }

private:
    std::vector<std::string> names_, ap_;
    std::vector<LabelSet> labels_;
    std::vector<std::vector<Action>> actions_;
};

// s0 -a1-> s1, s0 -a2-> s2; s1, s2 absorbing.
inline Mdp fig1a() {
    MdpBuilder b;
    int s0 = b.state("s0"), s1 = b.state("s1"), s2 = b.state("s2");
    b.action(s0, "a1", {{s1, 1.0}});
    b.action(s0, "a2", {{s2, 1.0}});
    b.self_loop(s1);
    b.self_loop(s2);
    return b.build();
}

// s0 -a1-> {s0: 1/3, s1: 2/3}, s0 -a2-> s2.
inline Mdp fig1b() {
    MdpBuilder b;
    int s0 = b.state("s0"), s1 = b.state("s1"), s2 = b.state("s2");
    b.action(s0, "a1", {{s0, 1.0 / 3}, {s1, 2.0 / 3}});
    b.action(s0, "a2", {{s2, 1.0}});
    b.self_loop(s1);
    b.self_loop(s2);
    return b.build();
}

// s0 -a1-> s0, s0 -a2-> s1; s1 absorbing.
inline Mdp fig2a() {
    MdpBuilder b;
    int s0 = b.state("s0"), s1 = b.state("s1");
    b.action(s0, "a1", {{s0, 1.0}});
    b.action(s0, "a2", {{s1, 1.0}});
    b.self_loop(s1);
    return b.build();
}

// Two states, each can stay or switch.
inline Mdp fig2b() {
    MdpBuilder b;
    int s0 = b.state("s0"), s1 = b.state("s1");
    b.action(s0, "a1", {{s0, 1.0}});
    b.action(s0, "a2", {{s1, 1.0}});
    b.action(s1, "a1", {{s1, 1.0}});
    b.action(s1, "a2", {{s0, 1.0}});
    return b.build();
}

// s0 -a1-> s1, s0 -a2-> s2, s1 -a1-> s3, s1 -a2-> s4, s2 -a1-> s4. s3 carries "g".
inline Mdp fig4a() {
    MdpBuilder b;
    b.set_ap({"g"});
    int s0 = b.state("s0"), s1 = b.state("s1"), s2 = b.state("s2");
    int s3 = b.state("s3", 1), s4 = b.state("s4");
    b.action(s0, "a1", {{s1, 1.0}});
    b.action(s0, "a2", {{s2, 1.0}});
    b.action(s1, "a1", {{s3, 1.0}});
    b.action(s1, "a2", {{s4, 1.0}});
    b.action(s2, "a1", {{s4, 1.0}});
    b.self_loop(s3);
    b.self_loop(s4);
    return b.build();
}

// Loop chain: s0 leaves to the absorbing s1 with probability delta.
inline MarkovChain fig2a_chain(double delta) {
    std::vector<std::vector<Outcome>> rows(2);
    if (delta < 1.0) rows[0].push_back({0, 1.0 - delta});
    if (delta > 0.0) rows[0].push_back({1, delta});
    rows[1].push_back({1, 1.0});
    return MarkovChain({"s0", "s1"}, 0, {}, {0, 0}, rows);
}

// Entropy of the two-state loop chain that leaves with probability d.
inline double loop_chain_entropy(double d) {
    return -((1 - d) * std::log2(1 - d) + d * std::log2(d)) / d;
}

// Random MDP with `n` states and up to `max_actions` actions, reachable from
// state 0. Successor sets are drawn at random with Dirichlet-like weights.
inline Mdp random_mdp(std::mt19937_64& rng, int n, int max_actions, int max_succ, double self_loop_bias = 0.3) {
    std::uniform_int_distribution<int> nact(1, max_actions);
    std::uniform_int_distribution<int> nsucc(1, max_succ);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::bernoulli_distribution loop(self_loop_bias);
    MdpBuilder b;
    for (int i = 0; i < n; ++i) b.state("s" + std::to_string(i));
    std::vector<std::vector<Action>> acts(n);
    for (int s = 0; s < n; ++s) {
        int k = nact(rng);
        for (int a = 0; a < k; ++a) {
            int m = std::min(nsucc(rng), n);
            std::vector<int> targets;
            // Chain s -> s+1 on the first action keeps every state reachable.
            if (a == 0 && s + 1 < n) targets.push_back(s + 1);
            while (static_cast<int>(targets.size()) < m) {
                int t = loop(rng) ? s : pick(rng);
                if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
            }
            std::vector<double> w;
            double tot = 0;
            for (std::size_t i = 0; i < targets.size(); ++i) tot += w.emplace_back(u(rng));
            Action act{"a" + std::to_string(a + 1), {}};
            for (std::size_t i = 0; i < targets.size(); ++i) act.outcomes.push_back({targets[i], w[i] / tot});
            acts[s].push_back(std::move(act));
        }
    }
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    return Mdp(names, 0, {}, std::vector<LabelSet>(n, 0), acts);
}

// 11x11 grid: start (0,5), target T at (10,5), six blocked cells labeled B.
// T and B cells are absorbing.
inline GridWorldSpec reach_avoid_grid(SlipModel model = SlipModel::Diagonal) {
    GridWorldSpec g;
    g.width = 11;
    g.height = 11;
    g.initial = {0, 5};
    std::vector<Cell> bad{{4, 3}, {5, 3}, {6, 3}, {4, 7}, {5, 7}, {6, 7}};
    g.absorbing = {{10, 5}};
    g.absorbing.insert(g.absorbing.end(), bad.begin(), bad.end());
    g.labels["T"] = {{10, 5}};
    g.labels["B"] = bad;
    g.slip_model = model;
    return g;
}

// 6x6 grid with goal cells g1..g5 and an absorbing exit cell E at (5,5).
inline GridWorldSpec ladder_grid() {
    GridWorldSpec g;
    g.width = 6;
    g.height = 6;
    g.initial = {0, 0};
    g.absorbing = {{5, 5}};
    g.labels["E"] = {{5, 5}};
    g.labels["g1"] = {{2, 0}};
    g.labels["g2"] = {{4, 1}};
    g.labels["g3"] = {{1, 3}};
    g.labels["g4"] = {{4, 3}};
    g.labels["g5"] = {{2, 5}};
    return g;
}

// Layered random MDP: transient states only move to higher indices, the last
// `sinks` states are absorbing and the first half of those carry "goal".
// Every end component is a single absorbing state, so the class is finite.
inline Mdp random_layered_mdp(std::uint64_t seed, int n, int sinks, int max_actions = 3, int max_succ = 3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const int transient = n - sinks;
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("s" + std::to_string(i));
    std::vector<LabelSet> labels(n, 0);
    for (int i = transient; i < transient + (sinks + 1) / 2; ++i) labels[i] = 1;
    std::vector<std::vector<Action>> acts(n);
    for (int s = 0; s < n; ++s) {
        if (s >= transient) {
            acts[s].push_back({"stay", {{s, 1.0}}});
            continue;
        }
        int k = std::uniform_int_distribution<int>(2, max_actions)(rng);
        for (int a = 0; a < k; ++a) {
            std::uniform_int_distribution<int> pick(s + 1, n - 1);
            int m = std::uniform_int_distribution<int>(1, max_succ)(rng);
            std::vector<int> targets;
            if (a == 0 && s + 1 < transient) targets.push_back(s + 1);
            for (int tries = 0; static_cast<int>(targets.size()) < m && tries < 20; ++tries) {
                int t = pick(rng);
                if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
            }
            std::vector<double> w;
            double tot = 0;
            for (std::size_t i = 0; i < targets.size(); ++i) tot += w.emplace_back(u(rng));
            Action act{"a" + std::to_string(a + 1), {}};
            for (std::size_t i = 0; i < targets.size(); ++i) act.outcomes.push_back({targets[i], w[i] / tot});
            acts[s].push_back(std::move(act));
        }
    }
    return Mdp(names, 0, {"goal"}, labels, acts);
}

}  // namespace maxent::testing
