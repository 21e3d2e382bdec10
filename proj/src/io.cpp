#include "maxent/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "maxent/error.hpp"

namespace maxent {

namespace {

void check_format(const Json& j, const char* what) {
    if (!j.is_object()) throw DomainError(std::string(what) + ": expected a JSON object");
    if (!j.contains("format") || !j["format"].is_string() || j["format"].get<std::string>() != kFormatTag)
        throw DomainError(std::string(what) + ": missing or unsupported \"format\" (expected \"" +
                          kFormatTag + "\")");
}

const Json& field(const Json& j, const char* key, const char* what) {
    if (!j.contains(key)) throw DomainError(std::string(what) + ": missing field \"" + key + "\"");
    return j[key];
}

template <class T>
T as(const Json& j, const std::string& where) {
    try {
        return j.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw DomainError(where + ": unexpected JSON type");
    }
}

Cell cell_from(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw DomainError(where + ": expected [x, y]");
    return {as<int>(j[0], where), as<int>(j[1], where)};
}

Json cells_to(const std::vector<Cell>& cells) {
    Json a = Json::array();
    for (Cell c : cells) a.push_back({c.x, c.y});
    return a;
}

std::vector<Cell> cells_from(const Json& j, const std::string& where) {
    if (!j.is_array()) throw DomainError(where + ": expected an array of cells");
    std::vector<Cell> out;
    for (const auto& c : j) out.push_back(cell_from(c, where));
    return out;
}

}  // namespace

Json mdp_to_json(const Mdp& mdp) {
    Json j;
    j["format"] = kFormatTag;
    j["states"] = mdp.state_names();
    j["initial"] = mdp.state_name(mdp.initial());
    j["ap"] = mdp.ap();
    Json labels = Json::object();
    Json actions = Json::object();
    Json trans = Json::array();
    for (int s = 0; s < mdp.num_states(); ++s) {
        const auto& name = mdp.state_name(s);
        Json lab = Json::array();
        for (std::size_t i = 0; i < mdp.ap().size(); ++i)
            if (mdp.label(s) >> i & 1) lab.push_back(mdp.ap()[i]);
        if (!lab.empty()) labels[name] = lab;
        Json acts = Json::array();
        for (const auto& a : mdp.actions(s)) {
            acts.push_back(a.name);
            for (const auto& o : a.outcomes) trans.push_back({name, a.name, mdp.state_name(o.target), o.prob});
        }
        actions[name] = acts;
    }
    j["labels"] = labels;
    j["actions"] = actions;
    j["transitions"] = trans;
    return j;
}

Mdp mdp_from_json(const Json& j) {
    const char* what = "MDP";
    check_format(j, what);
    auto names = as<std::vector<std::string>>(field(j, "states", what), "states");
    if (names.empty()) throw DomainError("states: empty state list");
    std::map<std::string, int> sid;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!sid.emplace(names[i], static_cast<int>(i)).second)
            throw DomainError("states: duplicate state \"" + names[i] + "\"");
    auto lookup = [&](const std::string& n, const std::string& where) {
        auto it = sid.find(n);
        if (it == sid.end()) throw DomainError(where + ": unknown state \"" + n + "\"");
        return it->second;
    };
    int initial = lookup(as<std::string>(field(j, "initial", what), "initial"), "initial");
    std::vector<std::string> ap;
    if (j.contains("ap")) ap = as<std::vector<std::string>>(j["ap"], "ap");
    if (ap.size() > 64) throw DomainError("ap: more than 64 atomic propositions");
    std::map<std::string, int> apid;
    for (std::size_t i = 0; i < ap.size(); ++i)
        if (!apid.emplace(ap[i], static_cast<int>(i)).second)
            throw DomainError("ap: duplicate proposition \"" + ap[i] + "\"");
    std::vector<LabelSet> labels(names.size(), 0);
    if (j.contains("labels")) {
        const Json& L = j["labels"];
        if (!L.is_object()) throw DomainError("labels: expected an object");
        for (auto it = L.begin(); it != L.end(); ++it) {
            int s = lookup(it.key(), "labels");
            for (const auto& p : as<std::vector<std::string>>(it.value(), "labels." + it.key())) {
                auto f = apid.find(p);
                if (f == apid.end()) throw DomainError("labels." + it.key() + ": unknown proposition \"" + p + "\"");
                labels[s] |= LabelSet{1} << f->second;
            }
        }
    }
    const Json& A = field(j, "actions", what);
    if (!A.is_object()) throw DomainError("actions: expected an object");
    std::vector<std::vector<Action>> actions(names.size());
    std::vector<std::map<std::string, int>> aid(names.size());
    for (auto it = A.begin(); it != A.end(); ++it) {
        int s = lookup(it.key(), "actions");
        for (const auto& a : as<std::vector<std::string>>(it.value(), "actions." + it.key())) {
            if (!aid[s].emplace(a, static_cast<int>(actions[s].size())).second)
                throw DomainError("actions." + it.key() + ": duplicate action \"" + a + "\"");
            actions[s].push_back({a, {}});
        }
    }
    const Json& T = field(j, "transitions", what);
    if (!T.is_array()) throw DomainError("transitions: expected an array");
    for (std::size_t k = 0; k < T.size(); ++k) {
        const Json& e = T[k];
        std::string where = "transitions[" + std::to_string(k) + "]";
        if (!e.is_array() || e.size() != 4) throw DomainError(where + ": expected [s, a, t, p]");
        int s = lookup(as<std::string>(e[0], where), where);
        auto an = as<std::string>(e[1], where);
        auto f = aid[s].find(an);
        if (f == aid[s].end()) throw DomainError(where + ": unknown action \"" + an + "\"");
        int t = lookup(as<std::string>(e[2], where), where);
        double p = as<double>(e[3], where);
        auto& outs = actions[s][f->second].outcomes;
        for (const auto& o : outs)
            if (o.target == t) throw DomainError(where + ": duplicate transition");
        outs.push_back({t, p});
    }
    return Mdp(std::move(names), initial, std::move(ap), std::move(labels), std::move(actions));
}

Json gridworld_to_json(const GridWorldSpec& g) {
    Json j;
    j["format"] = kFormatTag;
    j["width"] = g.width;
    j["height"] = g.height;
    j["initial"] = {g.initial.x, g.initial.y};
    j["absorbing"] = cells_to(g.absorbing);
    j["walls"] = cells_to(g.walls);
    Json labels = Json::object();
    for (const auto& [k, v] : g.labels) labels[k] = cells_to(v);
    j["labels"] = labels;
    j["p_main"] = g.p_main;
    j["p_slip"] = g.p_slip;
    j["slip_model"] = g.slip_model == SlipModel::Diagonal ? "diagonal" : "lateral";
    return j;
}

GridWorldSpec gridworld_from_json(const Json& j) {
    const char* what = "grid world";
    check_format(j, what);
    GridWorldSpec g;
    g.width = as<int>(field(j, "width", what), "width");
    g.height = as<int>(field(j, "height", what), "height");
    g.initial = cell_from(field(j, "initial", what), "initial");
    if (j.contains("absorbing")) g.absorbing = cells_from(j["absorbing"], "absorbing");
    if (j.contains("walls")) g.walls = cells_from(j["walls"], "walls");
    if (j.contains("labels")) {
        if (!j["labels"].is_object()) throw DomainError("labels: expected an object");
        for (auto it = j["labels"].begin(); it != j["labels"].end(); ++it)
            g.labels[it.key()] = cells_from(it.value(), "labels." + it.key());
    }
    if (j.contains("p_main")) g.p_main = as<double>(j["p_main"], "p_main");
    if (j.contains("p_slip")) g.p_slip = as<double>(j["p_slip"], "p_slip");
    if (j.contains("slip_model")) {
        auto m = as<std::string>(j["slip_model"], "slip_model");
        if (m == "diagonal") g.slip_model = SlipModel::Diagonal;
        else if (m == "lateral") g.slip_model = SlipModel::Lateral;
        else throw DomainError("slip_model: expected \"diagonal\" or \"lateral\"");
    }
    check_gridworld(g);
    return g;
}

Json policy_to_json(const Mdp& mdp, const StationaryPolicy& policy) {
    Json j = Json::object();
    for (int s = 0; s < mdp.num_states(); ++s) {
        Json d = Json::object();
        for (int a = 0; a < mdp.num_actions(s); ++a) d[mdp.actions(s)[a].name] = policy.dist[s][a];
        j[mdp.state_name(s)] = d;
    }
    return j;
}

StationaryPolicy policy_from_json(const Mdp& mdp, const Json& j) {
    if (!j.is_object()) throw DomainError("policy: expected an object");
    StationaryPolicy pol;
    pol.dist.resize(mdp.num_states());
    std::vector<char> seen(mdp.num_states(), 0);
    for (int s = 0; s < mdp.num_states(); ++s) pol.dist[s].assign(mdp.num_actions(s), 0.0);
    for (auto it = j.begin(); it != j.end(); ++it) {
        int s = mdp.find_state(it.key());
        if (s < 0) throw DomainError("policy: unknown state \"" + it.key() + "\"");
        seen[s] = 1;
        if (!it.value().is_object()) throw DomainError("policy." + it.key() + ": expected an object");
        for (auto a = it.value().begin(); a != it.value().end(); ++a) {
            int idx = -1;
            for (int k = 0; k < mdp.num_actions(s); ++k)
                if (mdp.actions(s)[k].name == a.key()) idx = k;
            if (idx < 0) throw DomainError("policy." + it.key() + ": unknown action \"" + a.key() + "\"");
            pol.dist[s][idx] = as<double>(a.value(), "policy." + it.key() + "." + a.key());
        }
    }
    for (int s = 0; s < mdp.num_states(); ++s)
        if (!seen[s]) throw DomainError("policy: no distribution for state \"" + mdp.state_name(s) + "\"");
    return pol;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("file not found: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot write file: " + path);
    out << text;
    if (!out) throw DomainError("write failed: " + path);
}

Json read_json_file(const std::string& path) {
    std::string text = read_text_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(path + ": malformed JSON at byte " + std::to_string(e.byte));
    }
}

Mdp load_model(const std::string& path) {
    Json j = read_json_file(path);
    if (j.is_object() && j.contains("width")) return build_gridworld(gridworld_from_json(j));
    return mdp_from_json(j);
}

std::string format_float(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace maxent
