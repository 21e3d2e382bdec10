#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxent/io.hpp"

namespace maxent {

enum class SweepVariable { Gamma, Beta, Ell, Task };
const char* to_string(SweepVariable v);

// One entry of a task sweep: a goal sequence or an automaton file.
struct TaskSpec {
    std::vector<std::string> goals;
    std::string dra_path;
    std::string label() const;
};

struct ExperimentSpec {
    std::string model;               // MDP or grid-world JSON path
    std::optional<std::string> dra;  // automaton path (HOA or JSON)
    SweepVariable variable = SweepVariable::Gamma;
    std::vector<double> values;      // +inf stands for "max" in a beta sweep
    std::vector<TaskSpec> tasks;
    std::optional<double> gamma, beta, ell;
    double epsilon = 1e-6;
    double tol = 1e-8;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    int simulate_runs = 0;
    int max_steps = 10000;
};

// Relative paths are resolved against base_dir. Throws DomainError on an
// invalid spec (empty or unsorted grid, missing keys).
ExperimentSpec experiment_from_json(const Json& j, const std::string& base_dir = ".");
ExperimentSpec load_experiment(const std::string& path);

struct SweepRow {
    int index = 0;
    std::string value;     // printed grid value or task label
    std::string status;    // "optimal", or the error text of a failed point
    double objective = 0.0;
    double entropy = 0.0;
    double o_avg = 0.0;
    std::optional<double> reach;
    std::optional<double> empirical_reach;
    double wall_seconds = 0.0;
};

// Worker count from MAXENT_THREADS, else the hardware concurrency; at least 1.
int sweep_threads();

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, int threads = sweep_threads());

// Fixed columns: index,variable,value,status,objective,entropy,o_avg,reach_probability,empirical_reach,seed
std::string sweep_csv(const ExperimentSpec& spec, const std::vector<SweepRow>& rows);
// index,value,wall_seconds
std::string timings_csv(const std::vector<SweepRow>& rows);

// Writes results.csv and timings.csv into spec.output_dir; returns the rows.
std::vector<SweepRow> run_sweep_to_files(const ExperimentSpec& spec, int threads = sweep_threads());

}  // namespace maxent
