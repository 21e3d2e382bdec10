#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxent/conic.hpp"
#include "maxent/entropy.hpp"
#include "maxent/mdp.hpp"

namespace maxent {

// Every action of every state in C becomes a self-loop with probability 1.
Mdp absorb_states(const Mdp& mdp, std::span<const int> C);

enum class ProgramObjective {
    MaxEntropy,   // maximize the entropy of the non-absorbed part
    Feasibility,  // minimize total non-absorbed occupancy, entropy enters only via ell
    MinTime,      // minimize occupancy of `time_states`; no entropy terms
};

struct ProgramOptions {
    ProgramObjective objective = ProgramObjective::MaxEntropy;
    std::optional<double> ell;    // entropy floor in bits
    std::optional<double> gamma;  // cap on total non-absorbed occupancy
    std::optional<double> beta;   // sum of lambda over beta_targets >= beta
    std::vector<int> beta_targets;
    std::optional<double> epsilon;  // sum of lambda over epsilon_states >= epsilon
    std::vector<int> epsilon_states;
    std::optional<std::vector<int>> time_states;  // MinTime; default all states outside C
};

// One hypograph scalar t with (t, eta(s,target), nu(s)) in the exponential cone.
struct EntropyTerm {
    int state;
    int target;
    int var;
};

struct EntropyProgram {
    Mdp mdp;                              // absorbed MDP
    std::vector<char> in_c;
    ProgramOptions opts;
    std::vector<std::vector<int>> sa_var;  // [s][a] -> variable, empty for s in C
    std::vector<int> state_var;            // s in C -> variable, else -1
    std::vector<EntropyTerm> terms;
    int num_vars = 0;
    int balance_rows = 0;
    conic::Problem conic;
    // Named linear side constraints as rows of h - Gx >= 0.
    std::vector<std::pair<std::string, int>> side_rows;
};

EntropyProgram build_program(const Mdp& absorbed, std::span<const int> C, const ProgramOptions& opts);

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIterations };
const char* to_string(SolveStatus s);

struct SolutionVector {
    SolveStatus status = SolveStatus::MaxIterations;
    std::vector<std::vector<double>> lambda_sa;  // [s][a], zeros for s in C
    std::vector<double> lambda_state;            // s in C, zeros elsewhere
    double objective = 0.0;  // entropy bits (MaxEntropy) or occupancy (Feasibility/MinTime)
    double entropy_bits = 0.0;  // entropy recomputed from lambda
    double gap = 0.0;  // |primal - dual| objective, in objective units
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    std::vector<std::pair<std::string, double>> slacks;
    // Unbounded: improving circulation over lambda_sa.
    std::vector<std::vector<double>> ray;
    std::string detail;
};

SolutionVector solve_program(const EntropyProgram& program, double tol = 1e-8);

// Entropy (bits) of the occupancy measure: sum over s not in C, t of -eta log2(eta/nu).
double occupancy_entropy(const Mdp& mdp, const std::vector<std::vector<double>>& lambda_sa);

inline constexpr double kExtractThreshold = 1e-9;

StationaryPolicy extract_policy(const Mdp& mdp, const SolutionVector& sol, std::span<const int> C);

// States of all bottom strongly connected MECs, ascending.
std::vector<int> bsc_mec_states(const Mdp& mdp, const MecDecomposition& dec);

// Uniform over `acts` at s, zero elsewhere.
void set_uniform(StationaryPolicy& pol, int s, const std::vector<int>& acts);

struct SynthesisOptions {
    std::optional<double> ell;
    std::optional<double> gamma;
    double epsilon = 1e-6;
    double tol = 1e-8;
};

struct SynthesisResult {
    EntropyClass cls;
    StationaryPolicy policy;
    double achieved_entropy = 0.0;  // chain_entropy of the induced chain, bits or +inf
    double objective = 0.0;         // program objective (bits for entropy objectives)
    SolutionVector solution;
    std::vector<int> absorbed;      // the set C used for the program
    std::vector<std::string> notes;
};

SynthesisResult synthesize_max_entropy(const Mdp& mdp, const SynthesisOptions& opts = {});

// Minimum expected time spent outside C in states that can reach B, subject to
// reaching B with probability at least beta. Throws DomainError if infeasible.
double min_expected_time(const Mdp& absorbed, std::span<const int> C, double beta,
                         std::span<const int> B, double tol = 1e-9);

}  // namespace maxent
