#include "maxent/report.hpp"

#include <cmath>
#include <sstream>

namespace maxent {

namespace {

Json names(const Mdp& mdp, const std::vector<int>& states) {
    Json out = Json::array();
    for (int s : states) out.push_back(mdp.state_name(s));
    return out;
}

Json lambda_json(const Mdp& mdp, const SolutionVector& sol, const std::vector<int>& absorbed) {
    Json sa = Json::object(), st = Json::object();
    std::vector<char> inC(mdp.num_states(), 0);
    for (int s : absorbed) inC[s] = 1;
    for (int s = 0; s < mdp.num_states(); ++s) {
        if (inC[s]) {
            if (s < static_cast<int>(sol.lambda_state.size())) st[mdp.state_name(s)] = sol.lambda_state[s];
            continue;
        }
        if (s >= static_cast<int>(sol.lambda_sa.size())) continue;
        Json row = Json::object();
        for (int a = 0; a < mdp.num_actions(s); ++a) row[mdp.actions(s)[a].name] = sol.lambda_sa[s][a];
        sa[mdp.state_name(s)] = row;
    }
    return Json{{"state_action", sa}, {"absorbed", st}};
}

Json solution_json(const Mdp& mdp, const SynthesisResult& res) {
    const auto& sol = res.solution;
    Json j;
    j["status"] = to_string(sol.status);
    if (!sol.detail.empty()) j["detail"] = sol.detail;
    j["objective"] = number_json(res.objective);
    j["achieved_entropy"] = number_json(res.achieved_entropy);
    j["gap"] = sol.gap;
    j["primal_residual"] = sol.primal_residual;
    j["dual_residual"] = sol.dual_residual;
    j["iterations"] = sol.iterations;
    Json slacks = Json::object();
    for (const auto& [name, v] : sol.slacks) slacks[name] = v;
    j["slacks"] = slacks;
    j["absorbed"] = names(mdp, res.absorbed);
    j["lambda"] = lambda_json(mdp, sol, res.absorbed);
    j["notes"] = res.notes;
    return j;
}

}  // namespace

Json number_json(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return nullptr;
    return v;
}

Json classification_json(const Mdp& mdp, const EntropyClass& cls) {
    Json j;
    j["format"] = kFormatTag;
    j["class"] = to_string(cls.tag);
    Json w = nullptr;
    if (cls.tag == EntropyTag::Infinite) {
        w = Json{{"state", mdp.state_name(cls.witness_state)},
                 {"mec", names(mdp, cls.mecs.mecs[cls.witness_mec])}};
    } else if (cls.tag == EntropyTag::Unbounded) {
        w = Json{{"mec", names(mdp, cls.mecs.mecs[cls.witness_mec])}};
    }
    j["witness"] = w;
    j["mec_count"] = cls.mecs.mecs.size();
    return j;
}

Json decomposition_json(const Mdp& mdp, const MecDecomposition& dec) {
    Json j;
    j["format"] = kFormatTag;
    Json mecs = Json::array();
    for (int k = 0; k < static_cast<int>(dec.mecs.size()); ++k) {
        Json m;
        m["states"] = names(mdp, dec.mecs[k]);
        Json ret = Json::object();
        for (int s : dec.mecs[k]) {
            Json acts = Json::array();
            for (int a : dec.retained[s]) acts.push_back(mdp.actions(s)[a].name);
            ret[mdp.state_name(s)] = acts;
        }
        m["retained_actions"] = ret;
        m["bottom_strongly_connected"] = is_bsc_mec(mdp, dec, k);
        mecs.push_back(m);
    }
    j["mecs"] = mecs;
    std::vector<int> outside;
    for (int s = 0; s < mdp.num_states(); ++s)
        if (dec.membership[s] < 0) outside.push_back(s);
    j["states_outside_mecs"] = names(mdp, outside);
    Json sccs = Json::array();
    for (const auto& c : strongly_connected_components(mdp_digraph(mdp))) sccs.push_back(names(mdp, c));
    j["sccs"] = sccs;
    return j;
}

Json certificate_json(const Mdp& mdp, const SynthesisResult& res) {
    Json j = solution_json(mdp, res);
    j["format"] = kFormatTag;
    j["class"] = classification_json(mdp, res.cls);
    if (!res.solution.ray.empty()) {
        Json ray = Json::object();
        for (int s = 0; s < mdp.num_states(); ++s)
            for (int a = 0; a < static_cast<int>(res.solution.ray[s].size()); ++a)
                if (res.solution.ray[s][a] != 0.0) ray[mdp.state_name(s)][mdp.actions(s)[a].name] = res.solution.ray[s][a];
        j["ray"] = ray;
    }
    return j;
}

Json constrained_json(const Mdp& mdp, const ConstrainedResult& res) {
    const Mdp& pm = res.product.mdp;
    const FiniteMemoryController& ctrl = res.controller;
    const Dra& dra = ctrl.dra();
    Json j;
    j["format"] = kFormatTag;
    j["class"] = classification_json(pm, res.synthesis.cls);
    j["beta_requested"] = res.beta_requested;
    j["beta_used"] = res.beta_used;
    j["beta_achieved"] = res.beta_achieved;
    j["max_reach_probability"] = res.max_reach;
    j["lambda_B"] = res.lambda_b;
    j["B_closed"] = res.b_closed;
    j["product_states"] = pm.num_states();
    Json acc = Json::array();
    for (int k : res.accepting) acc.push_back(names(pm, res.synthesis.cls.mecs.mecs[k]));
    j["accepting_mecs"] = acc;
    j["partition"] = {{"B", names(pm, res.partition.B)},
                      {"S0", names(pm, res.partition.S0)},
                      {"Sr", names(pm, res.partition.Sr)}};
    j["solution"] = solution_json(pm, res.synthesis);

    Json c;
    c["memory_states"] = dra.state_names;
    c["initial_memory"] = dra.state_names[ctrl.initial_memory()];
    Json updates = Json::array();
    for (const auto& u : ctrl.update_table()) {
        Json label = Json::array();
        for (std::size_t i = 0; i < dra.ap.size(); ++i)
            if (u.letter >> i & 1) label.push_back(dra.ap[i]);
        updates.push_back({{"memory", dra.state_names[u.memory]}, {"label", label}, {"next", dra.state_names[u.next]}});
    }
    c["updates"] = updates;
    Json actions = Json::object();
    for (int p = 0; p < pm.num_states(); ++p) {
        auto [s, q] = res.product.origin[p];
        Json row = Json::object();
        for (int a = 0; a < mdp.num_actions(s); ++a) row[mdp.actions(s)[a].name] = ctrl.product_policy().dist[p][a];
        actions[mdp.state_name(s)][dra.state_names[q]] = row;
    }
    c["actions"] = actions;
    j["controller"] = c;
    return j;
}

Json observer_json(const MarkovChain& chain, const ObserverReport& rep) {
    Json j;
    j["format"] = kFormatTag;
    j["o_avg"] = number_json(rep.o_avg);
    j["infinite"] = rep.infinite;
    Json states = Json::object();
    for (int s = 0; s < chain.num_states(); ++s)
        states[chain.state_name(s)] = {{"upsilon", rep.upsilon[s]},
                                       {"xi", number_json(rep.xi[s])},
                                       {"huffman_depth", huffman_expected_depth(chain, s)}};
    j["states"] = states;
    return j;
}

Json simulation_json(const MarkovChain& chain, const SimulationResult& sim) {
    Json j;
    j["format"] = kFormatTag;
    j["generator"] = "philox4x32-10";
    j["seed"] = sim.seed;
    j["runs"] = sim.runs;
    j["max_steps"] = sim.max_steps;
    j["absorbed_runs"] = sim.absorbed_runs;
    Json hits = Json::array();
    for (std::size_t k = 0; k < sim.bsccs.size(); ++k) {
        Json st = Json::array();
        for (int s : sim.bsccs[k]) st.push_back(chain.state_name(s));
        hits.push_back({{"states", st},
                        {"hits", sim.bscc_hits[k]},
                        {"frequency", static_cast<double>(sim.bscc_hits[k]) / sim.runs}});
    }
    j["bscc_hits"] = hits;
    j["mean_absorption_time"] = sim.mean_absorption_time;
    j["path_entropy_plugin"] = sim.path_entropy_plugin;
    j["path_entropy_mc"] = sim.path_entropy_mc;
    j["path_entropy_mc_stderr"] = sim.path_entropy_mc_stderr;
    j["distinct_paths"] = sim.distinct_paths;
    return j;
}

Json path_entropy_json(const PathEntropyResult& r, double cutoff) {
    return Json{{"format", kFormatTag},     {"entropy", r.entropy},   {"absorbed_mass", r.absorbed_mass},
                {"residual_mass", r.residual_mass}, {"paths", r.paths}, {"expansions", r.expansions},
                {"frontier_paths", r.frontier_paths}, {"mass_cutoff", cutoff}};
}

std::string residence_csv(const MarkovChain& chain) {
    auto res = residence_times(chain);
    std::ostringstream os;
    os << "state,xi,local_entropy\n";
    for (int s = 0; s < chain.num_states(); ++s) {
        if (res.xi[s] == 0.0) continue;
        os << chain.state_name(s) << ',' << format_float(res.xi[s]) << ',' << format_float(local_entropy(chain, s))
           << '\n';
    }
    return os.str();
}

}  // namespace maxent
