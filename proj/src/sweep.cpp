#include "maxent/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "maxent/dra.hpp"
#include "maxent/error.hpp"
#include "maxent/observer.hpp"
#include "maxent/product.hpp"
#include "maxent/simulate.hpp"
#include "maxent/synthesis.hpp"

namespace maxent {

const char* to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::Gamma: return "gamma";
        case SweepVariable::Beta: return "beta";
        case SweepVariable::Ell: return "ell";
        case SweepVariable::Task: return "task";
    }
    return "unknown";
}

std::string TaskSpec::label() const {
    if (!dra_path.empty()) return dra_path;
    std::string out;
    for (const auto& g : goals) out += (out.empty() ? "" : ">") + g;
    return out;
}

namespace {

namespace fs = std::filesystem;

std::string resolve(const std::string& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? p : (fs::path(base) / path).lexically_normal().string();
}

std::optional<double> opt_number(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_number()) throw DomainError(where + "." + key + " must be a number");
    return j[key].get<double>();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c != '\n' ? c : ' ';
    }
    return out + "\"";
}

std::string value_text(double v) { return std::isinf(v) ? "max" : format_float(v); }

Dra load_dra(const std::string& path) { return parse_dra(read_text_file(path)); }

SweepRow evaluate(const ExperimentSpec& spec, const Mdp& mdp, const std::optional<Dra>& shared_dra, int i) {
    SweepRow row;
    row.index = i;
    auto t0 = std::chrono::steady_clock::now();
    try {
        std::optional<Dra> dra = shared_dra;
        std::optional<double> gamma = spec.gamma, beta = spec.beta, ell = spec.ell;
        if (spec.variable == SweepVariable::Task) {
            const TaskSpec& t = spec.tasks[i];
            row.value = t.label();
            dra = t.dra_path.empty() ? sequence_dra(t.goals) : load_dra(t.dra_path);
        } else {
            double v = spec.values[i];
            row.value = value_text(v);
            if (spec.variable == SweepVariable::Gamma) gamma = v;
            if (spec.variable == SweepVariable::Ell) ell = v;
            if (spec.variable == SweepVariable::Beta) beta = std::isinf(v) ? max_satisfaction_probability(mdp, *dra) : v;
        }
        std::optional<MarkovChain> chain;
        if (dra) {
            ConstrainedOptions o;
            o.beta = beta.value_or(1.0);
            if (spec.variable == SweepVariable::Task && !beta) o.beta = max_satisfaction_probability(mdp, *dra);
            o.gamma = gamma;
            o.ell = ell;
            o.epsilon = spec.epsilon;
            o.tol = spec.tol;
            auto r = synthesize_constrained(mdp, *dra, o);
            row.status = to_string(r.synthesis.solution.status);
            row.objective = r.synthesis.objective;
            row.entropy = r.synthesis.achieved_entropy;
            row.reach = r.beta_achieved;
            chain = induce_chain(r.product.mdp, r.synthesis.policy);
            if (spec.simulate_runs > 0) {
                std::vector<int> B;
                for (int k : r.accepting)
                    B.insert(B.end(), r.synthesis.cls.mecs.mecs[k].begin(), r.synthesis.cls.mecs.mecs[k].end());
                row.empirical_reach =
                    simulate_controller(mdp, r.controller, B, spec.simulate_runs, spec.max_steps, spec.seed).frequency;
            }
        } else {
            SynthesisOptions o;
            o.gamma = gamma;
            o.ell = ell;
            o.epsilon = spec.epsilon;
            o.tol = spec.tol;
            auto r = synthesize_max_entropy(mdp, o);
            row.status = to_string(r.solution.status);
            row.objective = r.objective;
            row.entropy = r.achieved_entropy;
            chain = induce_chain(mdp, r.policy);
        }
        row.o_avg = expected_observations(*chain).o_avg;
    } catch (const DomainError& e) {
        row.status = std::string("error: ") + e.what();
    } catch (const std::exception& e) {
        row.status = std::string("internal error: ") + e.what();
    }
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

}  // namespace

ExperimentSpec experiment_from_json(const Json& j, const std::string& base_dir) {
    if (!j.is_object() || !j.contains("format") || j["format"] != kFormatTag)
        throw DomainError(std::string("experiment: missing or unsupported \"format\" (expected \"") + kFormatTag +
                          "\")");
    ExperimentSpec s;
    if (!j.contains("model") || !j["model"].is_string()) throw DomainError("experiment: \"model\" must be a path");
    s.model = resolve(base_dir, j["model"].get<std::string>());
    if (j.contains("dra")) {
        if (!j["dra"].is_string()) throw DomainError("experiment: \"dra\" must be a path");
        s.dra = resolve(base_dir, j["dra"].get<std::string>());
    }
    if (!j.contains("sweep") || !j["sweep"].is_object()) throw DomainError("experiment: missing \"sweep\" object");
    const Json& sw = j["sweep"];
    std::string var = sw.value("variable", "");
    if (var == "gamma") s.variable = SweepVariable::Gamma;
    else if (var == "beta") s.variable = SweepVariable::Beta;
    else if (var == "ell") s.variable = SweepVariable::Ell;
    else if (var == "task") s.variable = SweepVariable::Task;
    else throw DomainError("experiment: sweep.variable must be gamma, beta, ell or task");

    if (s.variable == SweepVariable::Task) {
        if (!sw.contains("tasks") || !sw["tasks"].is_array()) throw DomainError("experiment: sweep.tasks must be an array");
        for (const auto& t : sw["tasks"]) {
            TaskSpec ts;
            if (t.is_string()) {
                ts.dra_path = resolve(base_dir, t.get<std::string>());
            } else if (t.is_array() && !t.empty()) {
                for (const auto& g : t) {
                    if (!g.is_string()) throw DomainError("experiment: task goals must be strings");
                    ts.goals.push_back(g.get<std::string>());
                }
            } else {
                throw DomainError("experiment: each task is an automaton path or a nonempty goal list");
            }
            s.tasks.push_back(std::move(ts));
        }
        if (s.tasks.empty()) throw DomainError("experiment: value grid is empty");
    } else {
        if (!sw.contains("values") || !sw["values"].is_array())
            throw DomainError("experiment: sweep.values must be an array");
        for (const auto& v : sw["values"]) {
            if (v.is_string() && v.get<std::string>() == "max" && s.variable == SweepVariable::Beta)
                s.values.push_back(std::numeric_limits<double>::infinity());
            else if (v.is_number()) s.values.push_back(v.get<double>());
            else throw DomainError("experiment: sweep values must be numbers (or \"max\" for beta)");
        }
        if (s.values.empty()) throw DomainError("experiment: value grid is empty");
        if (!std::is_sorted(s.values.begin(), s.values.end()))
            throw DomainError("experiment: value grid must be sorted ascending");
        if (s.variable == SweepVariable::Beta && !s.dra)
            throw DomainError("experiment: a beta sweep needs \"dra\"");
    }
    if (j.contains("fixed")) {
        const Json& f = j["fixed"];
        if (!f.is_object()) throw DomainError("experiment: \"fixed\" must be an object");
        s.gamma = opt_number(f, "gamma", "fixed");
        s.beta = opt_number(f, "beta", "fixed");
        s.ell = opt_number(f, "ell", "fixed");
        if (auto e = opt_number(f, "epsilon", "fixed")) s.epsilon = *e;
        if (auto t = opt_number(f, "tol", "fixed")) s.tol = *t;
    }
    if (j.contains("output")) {
        if (!j["output"].is_string()) throw DomainError("experiment: \"output\" must be a path");
        s.output_dir = resolve(base_dir, j["output"].get<std::string>());
    } else {
        s.output_dir = base_dir;
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() || j["seed"].get<std::int64_t>() < 0) throw DomainError("experiment: \"seed\" must be a nonnegative integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("simulate_runs")) s.simulate_runs = j["simulate_runs"].get<int>();
    if (j.contains("max_steps")) s.max_steps = j["max_steps"].get<int>();
    if (s.simulate_runs < 0 || s.max_steps < 0) throw DomainError("experiment: negative run or step count");
    return s;
}

ExperimentSpec load_experiment(const std::string& path) {
    auto base = fs::path(path).parent_path().string();
    return experiment_from_json(read_json_file(path), base.empty() ? "." : base);
}

int sweep_threads() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    int n = hw > 0 ? hw : 1;
    if (const char* env = std::getenv("MAXENT_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) n = static_cast<int>(std::min<long>(v, 1024));
    }
    return std::max(1, n);
}

std::vector<SweepRow> run_sweep(const ExperimentSpec& spec, int threads) {
    Mdp mdp = load_model(spec.model);
    std::optional<Dra> dra;
    if (spec.dra) dra = load_dra(*spec.dra);
    const int points =
        static_cast<int>(spec.variable == SweepVariable::Task ? spec.tasks.size() : spec.values.size());
    if (points == 0) throw DomainError("experiment: value grid is empty");
    std::vector<SweepRow> rows(points);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < points; i = next++) rows[i] = evaluate(spec, mdp, dra, i);
    };
    const int n = std::clamp(threads, 1, points);
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::string sweep_csv(const ExperimentSpec& spec, const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "index,variable,value,status,objective,entropy,o_avg,reach_probability,empirical_reach,seed\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_float(*v) : std::string(); };
    for (const auto& r : rows) {
        const bool ok = r.status.rfind("error", 0) != 0 && r.status.rfind("internal", 0) != 0;
        os << r.index << ',' << to_string(spec.variable) << ',' << csv_field(r.value) << ',' << csv_field(r.status)
           << ',' << (ok ? format_float(r.objective) : "") << ',' << (ok ? format_float(r.entropy) : "") << ','
           << (ok ? format_float(r.o_avg) : "") << ',' << opt(r.reach) << ',' << opt(r.empirical_reach) << ','
           << spec.seed << '\n';
    }
    return os.str();
}

std::string timings_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "index,value,wall_seconds\n";
    for (const auto& r : rows) os << r.index << ',' << csv_field(r.value) << ',' << format_float(r.wall_seconds) << '\n';
    return os.str();
}

std::vector<SweepRow> run_sweep_to_files(const ExperimentSpec& spec, int threads) {
    auto rows = run_sweep(spec, threads);
    fs::create_directories(spec.output_dir);
    write_text_file((fs::path(spec.output_dir) / "results.csv").string(), sweep_csv(spec, rows));
    write_text_file((fs::path(spec.output_dir) / "timings.csv").string(), timings_csv(rows));
    return rows;
}

}  // namespace maxent
