#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maxent {

// Bit i set means atomic proposition i holds. At most 64 propositions.
using LabelSet = std::uint64_t;

inline constexpr double kStochasticTol = 1e-9;

struct Outcome {
    int target = 0;
    double prob = 0.0;
};

struct Action {
    std::string name;
    std::vector<Outcome> outcomes;
};

// Finite MDP with labeled states. Indices are dense; names are metadata.
// The constructor does not check the model; use validate_mdp for that.
class Mdp {
public:
    Mdp() = default;
    Mdp(std::vector<std::string> state_names, int initial, std::vector<std::string> ap,
        std::vector<LabelSet> labels, std::vector<std::vector<Action>> actions);

    int num_states() const { return static_cast<int>(names_.size()); }
    int initial() const { return initial_; }
    const std::string& state_name(int s) const { return names_[s]; }
    const std::vector<std::string>& state_names() const { return names_; }
    const std::vector<std::string>& ap() const { return ap_; }
    LabelSet label(int s) const { return labels_[s]; }
    const std::vector<LabelSet>& labels() const { return labels_; }
    const std::vector<Action>& actions(int s) const { return actions_[s]; }
    int num_actions(int s) const { return static_cast<int>(actions_[s].size()); }
    std::size_t num_state_actions() const;

    // Targets with positive probability under action a, ascending, no repeats.
    std::vector<int> successors(int s, int a) const;
    // Union of successors over a subset of actions, or over all of them.
    std::vector<int> successors(int s, std::span<const int> acts) const;
    std::vector<int> successors_all(int s) const;

    // -1 when absent.
    int find_state(std::string_view name) const;
    int find_ap(std::string_view name) const;

private:
    std::vector<std::string> names_;
    int initial_ = 0;
    std::vector<std::string> ap_;
    std::vector<LabelSet> labels_;
    std::vector<std::vector<Action>> actions_;
};

struct StationaryPolicy {
    // dist[s][a] = probability of action a in state s.
    std::vector<std::vector<double>> dist;
};

// Row-stochastic chain; rows are sorted by target and hold positive entries only.
class MarkovChain {
public:
    MarkovChain() = default;
    MarkovChain(std::vector<std::string> state_names, int initial, std::vector<std::string> ap,
                std::vector<LabelSet> labels, std::vector<std::vector<Outcome>> rows);

    int num_states() const { return static_cast<int>(rows_.size()); }
    int initial() const { return initial_; }
    const std::string& state_name(int s) const { return names_[s]; }
    const std::vector<std::string>& state_names() const { return names_; }
    const std::vector<std::string>& ap() const { return ap_; }
    LabelSet label(int s) const { return labels_[s]; }
    const std::vector<Outcome>& row(int s) const { return rows_[s]; }
    double prob(int s, int t) const;

private:
    std::vector<std::string> names_;
    int initial_ = 0;
    std::vector<std::string> ap_;
    std::vector<LabelSet> labels_;
    std::vector<std::vector<Outcome>> rows_;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

ValidationReport validate_mdp(const Mdp& mdp);
ValidationReport validate_policy(const Mdp& mdp, const StationaryPolicy& policy);

// Throws DomainError if the policy does not match the MDP's shape.
MarkovChain induce_chain(const Mdp& mdp, const StationaryPolicy& policy);

// Product of consecutive transition probabilities. Throws DomainError when the
// prefix is empty or does not start at the initial state.
double path_prefix_probability(const MarkovChain& chain, std::span<const int> prefix);

// Deterministic policy choosing action `choice[s]` in each state.
StationaryPolicy deterministic_policy(const Mdp& mdp, std::span<const int> choice);
StationaryPolicy uniform_policy(const Mdp& mdp);

}  // namespace maxent
