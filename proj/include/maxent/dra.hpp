#pragma once

#include <string>
#include <vector>

#include "maxent/io.hpp"
#include "maxent/mdp.hpp"

namespace maxent {

// Letters are bitmasks over the automaton's own AP list.
inline constexpr int kMaxDraAp = 16;

struct RabinPair {
    std::vector<int> J;  // visited finitely often
    std::vector<int> K;  // visited infinitely often
};

struct Dra {
    std::vector<std::string> state_names;
    int initial = 0;
    std::vector<std::string> ap;
    std::vector<std::vector<int>> delta;  // delta[q][letter]
    std::vector<RabinPair> pairs;

    int num_states() const { return static_cast<int>(delta.size()); }
    int next(int q, LabelSet letter) const { return delta[q][letter]; }
};

// Checks totality, index ranges and pair sanity; throws DomainError.
void validate_dra(const Dra& dra);

// Dispatches on the first non-blank character: '{' means the JSON format,
// anything else is parsed as HOA.
Dra parse_dra(const std::string& text);
Dra parse_hoa(const std::string& text);
Dra dra_from_json(const Json& j);
Json dra_to_json(const Dra& dra);
std::string dra_to_hoa(const Dra& dra);

// Visit goals[0], then goals[1], ... in order (each letter may discharge
// several consecutive goals). States q0..qk; qk is accepting and absorbing.
Dra sequence_dra(const std::vector<std::string>& goals);

// Eventually always `target` while never `avoid`: states q0 (initial), qN,
// qT, qB; one pair J = {q0, qN, qB}, K = {qT}; qB is a sink.
Dra persistence_avoid_dra(const std::string& target, const std::string& avoid);

// Acceptance of the ultimately periodic word prefix (cycle)^omega.
bool accepts_lasso(const Dra& dra, const std::vector<LabelSet>& prefix, const std::vector<LabelSet>& cycle);

}  // namespace maxent
