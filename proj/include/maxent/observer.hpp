#pragma once

#include <vector>

#include "maxent/mdp.hpp"

namespace maxent {

struct ObserverReport {
    std::vector<double> upsilon;  // expected yes-no probes per state
    std::vector<double> xi;       // residence times
    double o_avg = 0.0;           // +inf when a recurrent state is stochastic
    bool infinite = false;
};

// Sorted-row probe count: sum_{i<n} i p_(i) + (n-1) p_(n) with the row sorted
// in decreasing order (ties by successor index); 0 for n <= 1.
double probe_count(const MarkovChain& chain, int s);
double probe_count(std::vector<double> probs);

ObserverReport expected_observations(const MarkovChain& chain);

// Expected codeword length of a binary Huffman code for the row.
double huffman_expected_depth(const std::vector<double>& probs);
double huffman_expected_depth(const MarkovChain& chain, int s);

}  // namespace maxent
