#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "maxent/mdp.hpp"
#include "maxent/product.hpp"

namespace maxent {

// Philox4x32-10 counter-based generator. Stateless: a (key, counter) pair
// always yields the same four words, so runs are independent of scheduling.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    explicit Philox4x32(std::uint64_t seed) : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}
    Block operator()(Block counter) const;
    // Two uniforms in [0, 1) with 53-bit resolution from the block at (a, b).
    std::array<double, 2> uniforms(std::uint64_t a, std::uint64_t b) const;

private:
    std::array<std::uint32_t, 2> key_;
};

struct SimulationResult {
    std::uint64_t seed = 0;
    int runs = 0;
    int max_steps = 0;
    int absorbed_runs = 0;                 // runs that entered a BSCC
    std::vector<std::vector<int>> bsccs;   // of the chain
    std::vector<int> bscc_hits;            // per BSCC
    double mean_absorption_time = 0.0;     // over absorbed runs
    double path_entropy_plugin = 0.0;      // bits, empirical frequencies of absorbed paths
    double path_entropy_mc = 0.0;          // bits, mean of -log2 P(path) over absorbed runs
    double path_entropy_mc_stderr = 0.0;
    std::size_t distinct_paths = 0;
    std::vector<std::vector<int>> trajectories;  // the first `keep` runs
};

// Each run starts at the initial state and stops on entering a BSCC or after
// max_steps transitions.
SimulationResult simulate(const MarkovChain& chain, int runs, int max_steps, std::uint64_t seed, int keep = 0);

struct ControllerRun {
    std::vector<int> states;
    std::vector<int> memory;
    std::vector<int> actions;
    bool satisfied = false;  // entered B (accepting-MEC states of the product)
};

struct ControllerSimulation {
    std::uint64_t seed = 0;
    int runs = 0;
    int satisfied = 0;
    double frequency = 0.0;
    double stderr_frequency = 0.0;
    std::vector<ControllerRun> kept;
};

// Executes the lifted controller on the original MDP. B is given in product
// states; a run is satisfied once its (state, memory) pair lies in B.
ControllerSimulation simulate_controller(const Mdp& mdp, const FiniteMemoryController& ctrl, std::span<const int> B,
                                         int runs, int max_steps, std::uint64_t seed, int keep = 0);

}  // namespace maxent
