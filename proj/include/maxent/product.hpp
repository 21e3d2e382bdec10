#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "maxent/dra.hpp"
#include "maxent/graph.hpp"
#include "maxent/mdp.hpp"
#include "maxent/synthesis.hpp"

namespace maxent {

struct ProductOptions {
    // Drop product states unreachable from the initial product state.
    bool prune = true;
};

struct ProductMdp {
    Mdp mdp;                                // states named "<s>|<q>"
    std::vector<std::pair<int, int>> origin;  // product state -> (s, q)
    std::vector<int> index;                 // s * |Q| + q -> product state or -1
    int dra_states = 0;
    std::vector<RabinPair> pairs;           // J^p, K^p over product states

    int state_of(int s, int q) const { return index[static_cast<std::size_t>(s) * dra_states + q]; }
};

// DRA letter of each MDP state. Throws DomainError when a DRA proposition is
// not an MDP proposition.
std::vector<LabelSet> dra_letters(const Mdp& mdp, const Dra& dra);

ProductMdp build_product(const Mdp& mdp, const Dra& dra, const ProductOptions& opts = {});

// Indices into mecs.mecs of the accepting MECs.
std::vector<int> accepting_mecs(const ProductMdp& product, const MecDecomposition& mecs);

// Distinct (s, t) pairs with some positive-probability action.
std::size_t count_edges(const Mdp& mdp);
// Positive-probability (s, a, t) triples.
std::size_t count_action_transitions(const Mdp& mdp);

struct MemoryUpdate {
    int memory;
    LabelSet letter;  // over the DRA propositions
    int next;
};

// Memory is the DRA state; after observing s' the memory becomes
// delta(q, L(s')).
class FiniteMemoryController {
public:
    FiniteMemoryController() = default;
    FiniteMemoryController(const Mdp& mdp, const Dra& dra, const ProductMdp& product, StationaryPolicy product_policy);

    int initial_memory() const { return initial_memory_; }
    int update(int q, int next_state) const { return dra_.next(q, letters_[next_state]); }
    // Falls back to the first action at memory states the product never reaches.
    std::vector<double> distribution(int s, int q) const;
    bool defined(int s, int q) const { return product_.state_of(s, q) >= 0; }
    bool deterministic() const;
    std::vector<MemoryUpdate> update_table() const;
    const Dra& dra() const { return dra_; }
    const ProductMdp& product() const { return product_; }
    const StationaryPolicy& product_policy() const { return policy_; }

private:
    Dra dra_;
    ProductMdp product_;
    std::vector<LabelSet> letters_;
    StationaryPolicy policy_;
    std::vector<int> num_actions_;
    int initial_memory_ = 0;
};

struct ConstrainedOptions {
    double beta = 1.0;
    std::optional<double> ell;
    std::optional<double> gamma;
    double epsilon = 1e-6;
    double tol = 1e-8;
};

struct ConstrainedResult {
    ProductMdp product;
    SynthesisResult synthesis;      // on product.mdp; cls.mecs is the product decomposition
    std::vector<int> accepting;     // accepting MEC indices
    StatePartition partition;
    double beta_requested = 0.0;
    double beta_used = 0.0;         // after clamping to the maximal reach probability
    double max_reach = 0.0;
    double beta_achieved = 0.0;     // reach probability of the induced product chain into B
    double lambda_b = 0.0;          // sum of lambda over B at the optimum
    bool b_closed = false;
    FiniteMemoryController controller;
};

// Margin under which a requested beta above the maximal reach probability is clamped.
inline constexpr double kBetaMargin = 1e-9;

// Maximal probability of reaching the accepting-MEC states of the product.
double max_satisfaction_probability(const Mdp& mdp, const Dra& dra);

ConstrainedResult synthesize_constrained(const Mdp& mdp, const Dra& dra, const ConstrainedOptions& opts);

FiniteMemoryController lift_policy(const Mdp& mdp, const Dra& dra, const ConstrainedResult& result);

// True when every successor of every B state under the policy stays in B.
bool closed_under(const MarkovChain& chain, std::span<const int> B);

}  // namespace maxent
