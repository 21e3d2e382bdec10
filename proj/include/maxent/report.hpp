#pragma once

#include <string>

#include "maxent/entropy.hpp"
#include "maxent/graph.hpp"
#include "maxent/io.hpp"
#include "maxent/observer.hpp"
#include "maxent/product.hpp"
#include "maxent/simulate.hpp"
#include "maxent/synthesis.hpp"

namespace maxent {

// JSON documents written by the command-line tool. Infinite values are
// written as the string "inf".
Json number_json(double v);

Json classification_json(const Mdp& mdp, const EntropyClass& cls);
Json decomposition_json(const Mdp& mdp, const MecDecomposition& dec);
Json certificate_json(const Mdp& mdp, const SynthesisResult& res);
Json constrained_json(const Mdp& mdp, const ConstrainedResult& res);
Json observer_json(const MarkovChain& chain, const ObserverReport& rep);
Json simulation_json(const MarkovChain& chain, const SimulationResult& sim);
Json path_entropy_json(const PathEntropyResult& r, double cutoff);

// state,xi,local_entropy for the reachable states of the chain.
std::string residence_csv(const MarkovChain& chain);

}  // namespace maxent
