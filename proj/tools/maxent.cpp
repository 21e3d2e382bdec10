// Command-line front end. Exit codes: 0 success, 1 domain error,
// 2 internal error, 64 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "maxent/dra.hpp"
#include "maxent/entropy.hpp"
#include "maxent/error.hpp"
#include "maxent/gridworld.hpp"
#include "maxent/io.hpp"
#include "maxent/observer.hpp"
#include "maxent/product.hpp"
#include "maxent/report.hpp"
#include "maxent/simulate.hpp"
#include "maxent/sweep.hpp"
#include "maxent/synthesis.hpp"

namespace fs = std::filesystem;
using namespace maxent;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitInternal = 2;
constexpr int kExitUsage = 64;

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::string stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string out_path(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

StationaryPolicy load_policy(const Mdp& mdp, const std::string& path) {
    auto pol = policy_from_json(mdp, read_json_file(path));
    auto rep = validate_policy(mdp, pol);
    if (!rep.ok()) throw DomainError("invalid policy: " + rep.violations.front());
    return pol;
}

MarkovChain load_chain(const std::string& model, const std::string& policy) {
    Mdp mdp = load_model(model);
    auto rep = validate_mdp(mdp);
    if (!rep.ok()) throw DomainError("invalid MDP: " + rep.violations.front());
    return induce_chain(mdp, load_policy(mdp, policy));
}

struct SynthFlags {
    std::optional<double> ell, gamma;
    double epsilon = 1e-6;
    double tol = 1e-8;
};

void add_synth_flags(CLI::App* cmd, SynthFlags& f) {
    cmd->add_option("--ell", f.ell, "Entropy floor in bits")->check(CLI::NonNegativeNumber);
    cmd->add_option("--gamma", f.gamma, "Cap on the expected time spent in non-absorbed states")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", f.epsilon, "Minimal flow into the witness end component (infinite class)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--tol", f.tol, "Solver tolerance")->capture_default_str()->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Maximum-entropy policy synthesis for Markov decision processes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "maxent 1.0");

    std::string model, policy, spec_path, dra_path, out_dir = ".", csv_path, tag, traj_path, out_file;
    SynthFlags sf;
    double beta = 1.0, cutoff = 1e-10;
    std::uint64_t node_cap = 10'000'000, seed = 0;
    int runs = 1000, steps = 10000, keep = 0;

    auto* classify = app.add_subcommand("classify", "Classify the maximum entropy as finite, infinite or unbounded");
    classify->add_option("model", model, "MDP or grid-world JSON")->required();

    auto* analyze = app.add_subcommand("analyze", "Print the MEC and SCC decomposition");
    analyze->add_option("model", model, "MDP or grid-world JSON")->required();

    auto* synth = app.add_subcommand("synthesize", "Synthesize a maximum-entropy stationary policy");
    synth->add_option("model", model, "MDP or grid-world JSON")->required();
    add_synth_flags(synth, sf);
    synth->add_option("-o,--out-dir", out_dir, "Directory for <stem>.policy.json, .certificate.json, .residence.csv")
        ->capture_default_str();

    auto* ltl = app.add_subcommand("synthesize-ltl", "Maximize entropy subject to satisfying a Rabin objective");
    ltl->add_option("model", model, "MDP or grid-world JSON")->required();
    ltl->add_option("--dra", dra_path, "Automaton file (HOA or JSON)")->required();
    ltl->add_option("--beta", beta, "Minimal satisfaction probability in (0,1]")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    add_synth_flags(ltl, sf);
    ltl->add_option("-o,--out-dir", out_dir, "Directory for <stem>.ltl.json and <stem>.residence.csv")
        ->capture_default_str();

    auto* ent = app.add_subcommand("entropy", "Entropy and residence times of the chain induced by a policy");
    ent->add_option("model", model, "MDP or grid-world JSON")->required();
    ent->add_option("policy", policy, "Policy JSON {state: {action: prob}}")->required();
    ent->add_option("--csv", csv_path, "Write the residence-time CSV (state,xi,local_entropy) here");

    auto* paths = app.add_subcommand("paths-entropy", "Entropy by explicit enumeration of absorbed paths");
    paths->add_option("model", model, "MDP or grid-world JSON")->required();
    paths->add_option("policy", policy, "Policy JSON")->required();
    paths->add_option("--cutoff", cutoff, "Stop when the unabsorbed mass drops below this")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    paths->add_option("--node-cap", node_cap, "Maximal number of expansions")->capture_default_str();

    auto* obs = app.add_subcommand("observe", "Expected number of observer probes");
    obs->add_option("model", model, "MDP or grid-world JSON")->required();
    obs->add_option("policy", policy, "Policy JSON")->required();
    obs->add_option("--csv", csv_path, "Append a (tag,o_avg,entropy) row to this CSV");
    obs->add_option("--tag", tag, "Tag for the CSV row, e.g. a beta value or task name");

    auto* grid = app.add_subcommand("gridworld", "Build an MDP from a grid-world spec");
    grid->add_option("spec", spec_path, "Grid-world JSON")->required();
    grid->add_option("-o,--output", out_file, "Output file (stdout when omitted)");

    auto* sim = app.add_subcommand("simulate", "Sample trajectories of the chain induced by a policy");
    sim->add_option("model", model, "MDP or grid-world JSON")->required();
    sim->add_option("policy", policy, "Policy JSON")->required();
    sim->add_option("--runs", runs, "Number of runs")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--steps", steps, "Step limit per run")->capture_default_str()->check(CLI::NonNegativeNumber);
    sim->add_option("--seed", seed, "Generator seed")->capture_default_str();
    sim->add_option("--trajectories", traj_path, "Write the first --keep trajectories as CSV");
    sim->add_option("--keep", keep, "Trajectories to keep")->capture_default_str()->check(CLI::NonNegativeNumber);

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep (MAXENT_THREADS caps the worker pool)");
    sweep->add_option("experiment", spec_path, "Experiment JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (classify->parsed()) {
            Mdp mdp = load_model(model);
            auto rep = validate_mdp(mdp);
            if (!rep.ok()) throw DomainError("invalid MDP: " + rep.violations.front());
            print_json(classification_json(mdp, classify_max_entropy(mdp)));
        } else if (analyze->parsed()) {
            Mdp mdp = load_model(model);
            auto rep = validate_mdp(mdp);
            if (!rep.ok()) throw DomainError("invalid MDP: " + rep.violations.front());
            print_json(decomposition_json(mdp, maximal_end_components(mdp)));
        } else if (synth->parsed()) {
            Mdp mdp = load_model(model);
            SynthesisOptions o;
            o.ell = sf.ell;
            o.gamma = sf.gamma;
            o.epsilon = sf.epsilon;
            o.tol = sf.tol;
            auto res = synthesize_max_entropy(mdp, o);
            std::string base = stem(model);
            std::string pol_file = out_path(out_dir, base + ".policy.json");
            std::string cert_file = out_path(out_dir, base + ".certificate.json");
            std::string csv_file = out_path(out_dir, base + ".residence.csv");
            write_text_file(pol_file, policy_to_json(mdp, res.policy).dump(2) + "\n");
            write_text_file(cert_file, certificate_json(mdp, res).dump(2) + "\n");
            write_text_file(csv_file, residence_csv(induce_chain(mdp, res.policy)));
            print_json({{"format", kFormatTag},
                        {"class", to_string(res.cls.tag)},
                        {"objective", number_json(res.objective)},
                        {"achieved_entropy", number_json(res.achieved_entropy)},
                        {"status", to_string(res.solution.status)},
                        {"policy", pol_file},
                        {"certificate", cert_file},
                        {"residence", csv_file}});
        } else if (ltl->parsed()) {
            Mdp mdp = load_model(model);
            Dra dra = parse_dra(read_text_file(dra_path));
            ConstrainedOptions o;
            o.beta = beta;
            o.ell = sf.ell;
            o.gamma = sf.gamma;
            o.epsilon = sf.epsilon;
            o.tol = sf.tol;
            auto res = synthesize_constrained(mdp, dra, o);
            std::string base = stem(model);
            std::string res_file = out_path(out_dir, base + ".ltl.json");
            std::string csv_file = out_path(out_dir, base + ".residence.csv");
            write_text_file(res_file, constrained_json(mdp, res).dump(2) + "\n");
            write_text_file(csv_file, residence_csv(induce_chain(res.product.mdp, res.synthesis.policy)));
            print_json({{"format", kFormatTag},
                        {"class", to_string(res.synthesis.cls.tag)},
                        {"objective", number_json(res.synthesis.objective)},
                        {"achieved_entropy", number_json(res.synthesis.achieved_entropy)},
                        {"beta_achieved", res.beta_achieved},
                        {"status", to_string(res.synthesis.solution.status)},
                        {"result", res_file},
                        {"residence", csv_file}});
        } else if (ent->parsed()) {
            auto chain = load_chain(model, policy);
            double h = chain_entropy(chain);
            if (!csv_path.empty()) write_text_file(csv_path, residence_csv(chain));
            print_json({{"format", kFormatTag}, {"entropy", number_json(h)}});
        } else if (paths->parsed()) {
            if (!(cutoff > 0.0 && cutoff < 1.0)) throw DomainError("--cutoff must lie in (0,1)");
            auto chain = load_chain(model, policy);
            print_json(path_entropy_json(enumerate_path_entropy(chain, cutoff, node_cap), cutoff));
        } else if (obs->parsed()) {
            auto chain = load_chain(model, policy);
            auto rep = expected_observations(chain);
            print_json(observer_json(chain, rep));
            if (!csv_path.empty()) {
                bool fresh = !fs::exists(csv_path);
                std::ofstream out(csv_path, std::ios::app | std::ios::binary);
                if (!out) throw DomainError("cannot write file: " + csv_path);
                if (fresh) out << "tag,o_avg,entropy\n";
                out << tag << ',' << format_float(rep.o_avg) << ',' << format_float(chain_entropy(chain)) << '\n';
            }
        } else if (grid->parsed()) {
            Mdp mdp = build_gridworld(gridworld_from_json(read_json_file(spec_path)));
            std::string text = mdp_to_json(mdp).dump(2) + "\n";
            if (out_file.empty()) std::cout << text;
            else write_text_file(out_file, text);
        } else if (sim->parsed()) {
            auto chain = load_chain(model, policy);
            auto r = simulate(chain, runs, steps, seed, keep);
            print_json(simulation_json(chain, r));
            if (!traj_path.empty()) {
                std::string text = "run,step,state\n";
                for (std::size_t k = 0; k < r.trajectories.size(); ++k)
                    for (std::size_t t = 0; t < r.trajectories[k].size(); ++t)
                        text += std::to_string(k) + ',' + std::to_string(t) + ',' +
                                chain.state_name(r.trajectories[k][t]) + '\n';
                write_text_file(traj_path, text);
            }
        } else if (sweep->parsed()) {
            auto spec = load_experiment(spec_path);
            auto rows = run_sweep_to_files(spec);
            int failed = 0;
            for (const auto& r : rows)
                if (r.status.rfind("error", 0) == 0 || r.status.rfind("internal", 0) == 0) ++failed;
            print_json({{"format", kFormatTag},
                        {"points", rows.size()},
                        {"failed_points", failed},
                        {"seed", spec.seed},
                        {"results", (fs::path(spec.output_dir) / "results.csv").string()},
                        {"timings", (fs::path(spec.output_dir) / "timings.csv").string()}});
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return 0;
}
