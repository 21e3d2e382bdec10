#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "maxent/graph.hpp"
#include "maxent/mdp.hpp"

namespace maxent {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Shannon entropy of the outgoing distribution of s, in bits.
double local_entropy(const MarkovChain& chain, int s);

// xi[s] is +inf for reachable recurrent states, 0 for unreachable states.
struct ResidenceVector {
    std::vector<double> xi;
    std::vector<int> transient;  // reachable transient states, ascending
};

ResidenceVector residence_times(const MarkovChain& chain);

// Probability, from each state, of eventually entering `targets`.
std::vector<double> reach_probabilities(const MarkovChain& chain, std::span<const int> targets);
double reach_probability(const MarkovChain& chain, std::span<const int> targets);

// +inf when some reachable recurrent state has positive local entropy.
double chain_entropy(const MarkovChain& chain);

enum class EntropyTag { Finite, Infinite, Unbounded };

struct EntropyClass {
    EntropyTag tag = EntropyTag::Finite;
    int witness_state = -1;  // Infinite: first state in order with >1 retained successor
    int witness_mec = -1;    // Unbounded: first non-BSC MEC; Infinite: MEC of witness_state
    MecDecomposition mecs;
};

const char* to_string(EntropyTag t);

EntropyClass classify_max_entropy(const Mdp& mdp);
// Same, with a precomputed decomposition.
EntropyClass classify_max_entropy(const Mdp& mdp, const MecDecomposition& mecs);

struct PathEntropyResult {
    double entropy = 0.0;        // bits over enumerated absorbed paths
    double absorbed_mass = 0.0;
    double residual_mass = 0.0;  // un-absorbed prefix mass left in the frontier
    std::uint64_t paths = 0;       // absorbed path fragments, saturating
    std::uint64_t expansions = 0;  // frontier nodes expanded; lumped prefixes count once
    double frontier_paths = 0.0;   // prefixes behind residual_mass, with multiplicity
};

// Best-first enumeration of the path fragments that first enter a BSCC, until
// the un-absorbed mass drops below mass_cutoff. Equiprobable prefixes ending in
// the same state are expanded once.
// Throws DomainError when node_cap expansions are exceeded.
PathEntropyResult enumerate_path_entropy(const MarkovChain& chain, double mass_cutoff,
                                         std::uint64_t node_cap = 10'000'000);

}  // namespace maxent
