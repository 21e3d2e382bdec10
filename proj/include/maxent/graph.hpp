#pragma once

#include <span>
#include <vector>

#include "maxent/mdp.hpp"

namespace maxent {

using Digraph = std::vector<std::vector<int>>;

// Tarjan's algorithm (iterative). Components come out in reverse topological
// order: every edge leaving a component points to an earlier one.
std::vector<std::vector<int>> strongly_connected_components(const Digraph& g);

Digraph mdp_digraph(const Mdp& mdp);
Digraph chain_digraph(const MarkovChain& chain);

struct MecDecomposition {
    std::vector<std::vector<int>> mecs;       // sorted state sets
    std::vector<int> membership;              // state -> MEC index, -1 if none
    std::vector<std::vector<int>> retained;   // state -> D(s), empty outside MECs

    std::vector<int> states_in_mecs() const;
};

MecDecomposition maximal_end_components(const Mdp& mdp);
// MECs of the sub-MDP on `allowed` states; actions that can leave the set are dropped.
MecDecomposition maximal_end_components(const Mdp& mdp, const std::vector<char>& allowed);

bool is_bsc_mec(const Mdp& mdp, const MecDecomposition& dec, int mec);

struct BsccDecomposition {
    std::vector<std::vector<int>> bsccs;
    std::vector<int> transient;
};

BsccDecomposition bottom_strongly_connected_components(const MarkovChain& chain);

// Forward reachability from `sources`; backward reachability to `targets`.
std::vector<char> reachable_from(const Digraph& g, std::span<const int> sources);
std::vector<char> can_reach(const Digraph& g, std::span<const int> targets);

struct StatePartition {
    std::vector<int> B, S0, Sr;
};

// B is given; S0 = states that cannot reach B in the full digraph; Sr = rest.
StatePartition reachability_partition(const Mdp& mdp, std::span<const int> B);

// Maximal probability of reaching `target` from each state (LP over the
// states that can reach the target in the digraph).
std::vector<double> max_reach_probabilities(const Mdp& mdp, std::span<const int> target);
double max_reach_probability(const Mdp& mdp, std::span<const int> target);

}  // namespace maxent
