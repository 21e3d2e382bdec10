#include "maxent/dra.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "maxent/error.hpp"

namespace maxent {

namespace {

// Boolean label expressions over AP indices.
struct Expr {
    enum Kind { True, False, Var, Not, And, Or } kind;
    int var = -1;
    std::unique_ptr<Expr> a, b;
    bool eval(LabelSet l) const {
        switch (kind) {
            case True: return true;
            case False: return false;
            case Var: return (l >> var) & 1;
            case Not: return !a->eval(l);
            case And: return a->eval(l) && b->eval(l);
            case Or: return a->eval(l) || b->eval(l);
        }
        return false;
    }
};

using ExprPtr = std::unique_ptr<Expr>;

class ExprParser {
public:
    // Atoms are integers (AP indices) or identifiers resolved against `ap`.
    ExprParser(std::string_view text, const std::vector<std::string>& ap, std::string where)
        : s_(text), ap_(ap), where_(std::move(where)) {}

    ExprPtr parse() {
        auto e = parse_or();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw DomainError(where_ + ", column " + std::to_string(pos_ + 1) + ": " + msg);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    static ExprPtr node(Expr::Kind k, ExprPtr a = nullptr, ExprPtr b = nullptr) {
        auto e = std::make_unique<Expr>();
        e->kind = k;
        e->a = std::move(a);
        e->b = std::move(b);
        return e;
    }
    ExprPtr parse_or() {
        auto l = parse_and();
        while (eat('|')) l = node(Expr::Or, std::move(l), parse_and());
        return l;
    }
    ExprPtr parse_and() {
        auto l = parse_not();
        while (eat('&')) l = node(Expr::And, std::move(l), parse_not());
        return l;
    }
    ExprPtr parse_not() {
        if (eat('!')) return node(Expr::Not, parse_not());
        return parse_atom();
    }
    ExprPtr parse_atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of label");
        if (eat('(')) {
            auto e = parse_or();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            int v = std::stoi(std::string(s_.substr(start, pos_ - start)));
            if (v >= static_cast<int>(ap_.size())) {
                pos_ = start;
                fail("unknown AP index " + std::to_string(v));
            }
            auto e = node(Expr::Var);
            e->var = v;
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            std::string id(s_.substr(start, pos_ - start));
            auto it = std::find(ap_.begin(), ap_.end(), id);
            if (it != ap_.end()) {
                auto e = node(Expr::Var);
                e->var = static_cast<int>(it - ap_.begin());
                return e;
            }
            if (id == "t") return node(Expr::True);
            if (id == "f") return node(Expr::False);
            pos_ = start;
            fail("unknown AP \"" + id + "\"");
        }
        if (c == '@') fail("label aliases are not supported");
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    const std::vector<std::string>& ap_;
    std::string where_;
    std::size_t pos_ = 0;
};

std::string letter_text(const std::vector<std::string>& ap, LabelSet l) {
    std::string out = "{";
    for (std::size_t i = 0; i < ap.size(); ++i)
        if (l >> i & 1) out += (out.size() > 1 ? "," : "") + ap[i];
    return out + "}";
}

struct Edge {
    int from;
    std::shared_ptr<Expr> label;
    int to;
    std::string where;
};

// Fills delta from explicit edges, rejecting overlaps and gaps.
void fill_delta(Dra& d, const std::vector<Edge>& edges) {
    const LabelSet letters = LabelSet{1} << d.ap.size();
    d.delta.assign(d.state_names.size(), std::vector<int>(letters, -1));
    std::vector<std::vector<const Edge*>> owner(d.state_names.size(), std::vector<const Edge*>(letters, nullptr));
    for (const auto& e : edges) {
        for (LabelSet l = 0; l < letters; ++l) {
            if (!e.label->eval(l)) continue;
            if (owner[e.from][l])
                throw DomainError(e.where + ": nondeterministic edges from state " + d.state_names[e.from] +
                                  " on letter " + letter_text(d.ap, l) + " (also " + owner[e.from][l]->where + ")");
            owner[e.from][l] = &e;
            d.delta[e.from][l] = e.to;
        }
    }
    for (std::size_t q = 0; q < d.delta.size(); ++q)
        for (LabelSet l = 0; l < letters; ++l)
            if (d.delta[q][l] < 0)
                throw DomainError("transition function not total: state " + d.state_names[q] +
                                  " has no edge on letter " + letter_text(d.ap, l));
}

// Minimal HOA tokenizer: tracks line numbers for diagnostics.
struct Token {
    enum Kind { Header, String, Int, Ident, Punct, Body, End, Eof } kind;
    std::string text;
    int line;
};

std::vector<Token> tokenize_hoa(const std::string& s) {
    std::vector<Token> out;
    int line = 1;
    std::size_t i = 0;
    auto err = [&](const std::string& m) { throw DomainError("HOA line " + std::to_string(line) + ": " + m); };
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < s.size() && s[i + 1] == '*') {
            auto e = s.find("*/", i + 2);
            if (e == std::string::npos) err("unterminated comment");
            line += static_cast<int>(std::count(s.begin() + i, s.begin() + e, '\n'));
            i = e + 2;
            continue;
        }
        if (c == '"') {
            std::string v;
            ++i;
            while (i < s.size() && s[i] != '"') {
                if (s[i] == '\\' && i + 1 < s.size()) ++i;
                if (s[i] == '\n') ++line;
                v += s[i++];
            }
            if (i >= s.size()) err("unterminated string");
            ++i;
            out.push_back({Token::String, v, line});
            continue;
        }
        if (s.compare(i, 8, "--BODY--") == 0) {
            out.push_back({Token::Body, "--BODY--", line});
            i += 8;
            continue;
        }
        if (s.compare(i, 7, "--END--") == 0) {
            out.push_back({Token::End, "--END--", line});
            i += 7;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t st = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            out.push_back({Token::Int, s.substr(st, i - st), line});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '@') {
            std::size_t st = i;
            while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '-' ||
                                    s[i] == '@' || s[i] == '.'))
                ++i;
            if (i < s.size() && s[i] == ':') {
                out.push_back({Token::Header, s.substr(st, i - st), line});
                ++i;
            } else {
                out.push_back({Token::Ident, s.substr(st, i - st), line});
            }
            continue;
        }
        if (std::string("[](){}!&|").find(c) != std::string::npos) {
            out.push_back({Token::Punct, std::string(1, c), line});
            ++i;
            continue;
        }
        err(std::string("unexpected character '") + c + "'");
    }
    out.push_back({Token::Eof, "", line});
    return out;
}

// Parses "Fin(a) & Inf(b) | ..." into (fin set, inf set) pairs.
std::vector<std::pair<int, int>> parse_rabin_condition(const std::vector<Token>& toks, std::size_t& i, int line) {
    auto err = [&](const std::string& m) {
        throw DomainError("HOA line " + std::to_string(line) + ": " + m + " (only Rabin acceptance is supported)");
    };
    auto punct = [&](const char* p) { return toks[i].kind == Token::Punct && toks[i].text == p; };
    auto set_term = [&](const char* name) {
        if (!(toks[i].kind == Token::Ident && toks[i].text == name)) err(std::string("expected ") + name);
        ++i;
        if (!punct("(")) err("expected '('");
        ++i;
        if (toks[i].kind != Token::Int) err("expected acceptance set number");
        int v = std::stoi(toks[i].text);
        ++i;
        if (!punct(")")) err("expected ')'");
        ++i;
        return v;
    };
    std::vector<std::pair<int, int>> out;
    for (;;) {
        bool paren = punct("(");
        if (paren) ++i;
        int fin = set_term("Fin");
        if (!punct("&")) err("expected '&'");
        ++i;
        int inf = set_term("Inf");
        if (paren) {
            if (!punct(")")) err("expected ')'");
            ++i;
        }
        out.push_back({fin, inf});
        if (!punct("|")) break;
        ++i;
    }
    return out;
}

}  // namespace

void validate_dra(const Dra& d) {
    const int n = d.num_states();
    if (n == 0) throw DomainError("automaton has no states");
    if (d.initial < 0 || d.initial >= n) throw DomainError("initial automaton state out of range");
    if (static_cast<int>(d.ap.size()) > kMaxDraAp)
        throw DomainError("automaton alphabet exceeds " + std::to_string(kMaxDraAp) + " propositions");
    const std::size_t letters = std::size_t{1} << d.ap.size();
    for (int q = 0; q < n; ++q) {
        if (d.delta[q].size() != letters) throw DomainError("transition function not total");
        for (int t : d.delta[q])
            if (t < 0 || t >= n) throw DomainError("transition target out of range");
    }
    if (d.pairs.empty()) throw DomainError("automaton has no Rabin pairs");
    for (const auto& p : d.pairs)
        for (const auto* set : {&p.J, &p.K})
            for (int q : *set)
                if (q < 0 || q >= n) throw DomainError("Rabin pair state out of range");
}

Dra parse_hoa(const std::string& text) {
    auto toks = tokenize_hoa(text);
    std::size_t i = 0;
    auto err = [&](const std::string& m) {
        throw DomainError("HOA line " + std::to_string(toks[i].line) + ": " + m);
    };
    if (!(toks[i].kind == Token::Header && toks[i].text == "HOA")) err("expected 'HOA: v1'");
    ++i;
    if (!(toks[i].kind == Token::Ident && toks[i].text == "v1")) err("unsupported HOA version");
    ++i;
    Dra d;
    int nstates = -1;
    std::vector<int> starts;
    std::optional<int> acc_sets;
    std::vector<std::pair<int, int>> cond;
    bool rabin_name = false;
    while (toks[i].kind == Token::Header) {
        std::string h = toks[i].text;
        int line = toks[i].line;
        ++i;
        if (h == "States") {
            if (toks[i].kind != Token::Int) err("expected state count");
            nstates = std::stoi(toks[i++].text);
        } else if (h == "Start") {
            if (toks[i].kind != Token::Int) err("expected start state");
            starts.push_back(std::stoi(toks[i++].text));
            if (toks[i].kind == Token::Punct && toks[i].text == "&") err("conjunctive start states are not supported");
        } else if (h == "AP") {
            if (toks[i].kind != Token::Int) err("expected AP count");
            int k = std::stoi(toks[i++].text);
            for (int a = 0; a < k; ++a) {
                if (toks[i].kind != Token::String) err("expected AP name");
                d.ap.push_back(toks[i++].text);
            }
        } else if (h == "Acceptance") {
            if (toks[i].kind != Token::Int) err("expected acceptance set count");
            acc_sets = std::stoi(toks[i++].text);
            cond = parse_rabin_condition(toks, i, line);
        } else if (h == "acc-name") {
            if (!(toks[i].kind == Token::Ident && toks[i].text == "Rabin"))
                err("acceptance '" + toks[i].text + "' is not supported; only Rabin");
            rabin_name = true;
            ++i;
            while (toks[i].kind == Token::Int) ++i;
        } else {
            // Other headers (name, tool, properties, ...) are skipped.
            while (toks[i].kind != Token::Header && toks[i].kind != Token::Body && toks[i].kind != Token::Eof) ++i;
        }
    }
    if (toks[i].kind != Token::Body) err("expected --BODY--");
    ++i;
    if (!rabin_name) err("missing 'acc-name: Rabin'");
    if (!acc_sets) err("missing Acceptance header");
    if (nstates <= 0) err("missing or empty States header");
    if (starts.size() != 1) err("exactly one Start state is required for a deterministic automaton");
    if (static_cast<int>(d.ap.size()) > kMaxDraAp) err("too many atomic propositions");
    d.state_names.resize(nstates);
    for (int q = 0; q < nstates; ++q) d.state_names[q] = "q" + std::to_string(q);
    std::vector<std::set<int>> state_acc(nstates);
    std::vector<Edge> edges;
    std::vector<char> declared(nstates, 0);
    while (toks[i].kind == Token::Header && toks[i].text == "State") {
        ++i;
        if (toks[i].kind != Token::Int) err("expected state number");
        int q = std::stoi(toks[i++].text);
        if (q < 0 || q >= nstates) err("state number out of range");
        if (declared[q]) err("state " + std::to_string(q) + " declared twice");
        declared[q] = 1;
        if (toks[i].kind == Token::String) d.state_names[q] = toks[i++].text;
        if (toks[i].kind == Token::Punct && toks[i].text == "{") {
            ++i;
            while (toks[i].kind == Token::Int) {
                int a = std::stoi(toks[i++].text);
                if (a < 0 || a >= *acc_sets) err("acceptance set out of range");
                state_acc[q].insert(a);
            }
            if (!(toks[i].kind == Token::Punct && toks[i].text == "}")) err("expected '}'");
            ++i;
        }
        while (toks[i].kind == Token::Punct && toks[i].text == "[") {
            int line = toks[i].line;
            ++i;
            std::string expr;
            while (!(toks[i].kind == Token::Punct && toks[i].text == "]")) {
                if (toks[i].kind == Token::Eof || toks[i].kind == Token::Header) err("unterminated label");
                expr += toks[i++].text + " ";
            }
            ++i;
            if (toks[i].kind != Token::Int) err("expected destination state");
            int to = std::stoi(toks[i++].text);
            if (to < 0 || to >= nstates) err("destination state out of range");
            if (toks[i].kind == Token::Punct && toks[i].text == "&") err("universal branching is not supported");
            if (toks[i].kind == Token::Punct && toks[i].text == "{")
                err("transition-based acceptance is not supported; use state-based acceptance");
            std::string where = "HOA line " + std::to_string(line);
            ExprParser ep(expr, d.ap, where);
            edges.push_back({q, std::shared_ptr<Expr>(ep.parse()), to, where});
        }
        if (toks[i].kind == Token::Int) err("implicit (unlabeled) edges are not supported");
    }
    if (toks[i].kind != Token::End) err("expected --END--");
    d.initial = starts[0];
    if (d.initial < 0 || d.initial >= nstates) err("start state out of range");
    fill_delta(d, edges);
    for (auto [fin, inf] : cond) {
        RabinPair p;
        for (int q = 0; q < nstates; ++q) {
            if (state_acc[q].count(fin)) p.J.push_back(q);
            if (state_acc[q].count(inf)) p.K.push_back(q);
        }
        d.pairs.push_back(std::move(p));
    }
    validate_dra(d);
    return d;
}

Dra dra_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("format") || j["format"] != kFormatTag)
        throw DomainError(std::string("automaton: missing or unsupported \"format\" (expected \"") + kFormatTag + "\")");
    Dra d;
    try {
        d.ap = j.at("ap").get<std::vector<std::string>>();
        d.state_names = j.at("states").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception&) {
        throw DomainError("automaton: \"ap\" and \"states\" must be string arrays");
    }
    if (static_cast<int>(d.ap.size()) > kMaxDraAp) throw DomainError("automaton: too many atomic propositions");
    auto sid = [&](const Json& v, const std::string& where) {
        if (!v.is_string()) throw DomainError(where + ": expected a state name");
        auto it = std::find(d.state_names.begin(), d.state_names.end(), v.get<std::string>());
        if (it == d.state_names.end()) throw DomainError(where + ": unknown state \"" + v.get<std::string>() + "\"");
        return static_cast<int>(it - d.state_names.begin());
    };
    if (!j.contains("initial")) throw DomainError("automaton: missing \"initial\"");
    d.initial = sid(j["initial"], "initial");
    if (!j.contains("transitions") || !j["transitions"].is_array())
        throw DomainError("automaton: \"transitions\" must be an array");
    std::vector<Edge> edges;
    for (std::size_t k = 0; k < j["transitions"].size(); ++k) {
        const Json& e = j["transitions"][k];
        std::string where = "transitions[" + std::to_string(k) + "]";
        if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("label") ||
            !e["label"].is_string())
            throw DomainError(where + ": expected {\"from\", \"label\", \"to\"}");
        ExprParser ep(e["label"].get<std::string>(), d.ap, where + ".label");
        edges.push_back({sid(e["from"], where + ".from"), std::shared_ptr<Expr>(ep.parse()), sid(e["to"], where + ".to"),
                         where});
    }
    fill_delta(d, edges);
    if (!j.contains("rabin_pairs") || !j["rabin_pairs"].is_array())
        throw DomainError("automaton: \"rabin_pairs\" must be an array");
    for (std::size_t k = 0; k < j["rabin_pairs"].size(); ++k) {
        const Json& p = j["rabin_pairs"][k];
        std::string where = "rabin_pairs[" + std::to_string(k) + "]";
        RabinPair rp;
        for (const char* key : {"J", "K"}) {
            if (!p.contains(key) || !p[key].is_array()) throw DomainError(where + ": missing " + key);
            auto& dst = std::string(key) == "J" ? rp.J : rp.K;
            for (const auto& q : p[key]) dst.push_back(sid(q, where + "." + key));
            std::sort(dst.begin(), dst.end());
        }
        d.pairs.push_back(std::move(rp));
    }
    validate_dra(d);
    return d;
}

Json dra_to_json(const Dra& d) {
    Json j;
    j["format"] = kFormatTag;
    j["type"] = "dra";
    j["ap"] = d.ap;
    j["states"] = d.state_names;
    j["initial"] = d.state_names[d.initial];
    Json tr = Json::array();
    const LabelSet letters = LabelSet{1} << d.ap.size();
    for (int q = 0; q < d.num_states(); ++q)
        for (LabelSet l = 0; l < letters; ++l) {
            std::string label;
            for (std::size_t i = 0; i < d.ap.size(); ++i)
                label += (i ? " & " : "") + std::string(l >> i & 1 ? "" : "!") + d.ap[i];
            if (label.empty()) label = "t";
            tr.push_back({{"from", d.state_names[q]}, {"label", label}, {"to", d.state_names[d.delta[q][l]]}});
        }
    j["transitions"] = tr;
    Json pairs = Json::array();
    for (const auto& p : d.pairs) {
        Json jp;
        jp["J"] = Json::array();
        jp["K"] = Json::array();
        for (int q : p.J) jp["J"].push_back(d.state_names[q]);
        for (int q : p.K) jp["K"].push_back(d.state_names[q]);
        pairs.push_back(jp);
    }
    j["rabin_pairs"] = pairs;
    return j;
}

std::string dra_to_hoa(const Dra& d) {
    std::ostringstream os;
    const int k = static_cast<int>(d.pairs.size());
    os << "HOA: v1\nStates: " << d.num_states() << "\nStart: " << d.initial << "\nAP: " << d.ap.size();
    for (const auto& a : d.ap) os << " \"" << a << "\"";
    os << "\nacc-name: Rabin " << k << "\nAcceptance: " << 2 * k << " ";
    for (int i = 0; i < k; ++i) os << (i ? " | " : "") << "(Fin(" << 2 * i << ") & Inf(" << 2 * i + 1 << "))";
    os << "\nproperties: deterministic state-acc explicit-labels\n--BODY--\n";
    const LabelSet letters = LabelSet{1} << d.ap.size();
    for (int q = 0; q < d.num_states(); ++q) {
        os << "State: " << q << " \"" << d.state_names[q] << "\"";
        std::vector<int> sets;
        for (int i = 0; i < k; ++i) {
            if (std::binary_search(d.pairs[i].J.begin(), d.pairs[i].J.end(), q)) sets.push_back(2 * i);
            if (std::binary_search(d.pairs[i].K.begin(), d.pairs[i].K.end(), q)) sets.push_back(2 * i + 1);
        }
        if (!sets.empty()) {
            os << " {";
            for (std::size_t i = 0; i < sets.size(); ++i) os << (i ? " " : "") << sets[i];
            os << "}";
        }
        os << "\n";
        for (LabelSet l = 0; l < letters; ++l) {
            os << "[";
            if (d.ap.empty()) os << "t";
            for (std::size_t i = 0; i < d.ap.size(); ++i) os << (i ? " & " : "") << (l >> i & 1 ? "" : "!") << i;
            os << "] " << d.delta[q][l] << "\n";
        }
    }
    os << "--END--\n";
    return os.str();
}

Dra parse_dra(const std::string& text) {
    auto p = text.find_first_not_of(" \t\r\n");
    if (p != std::string::npos && text[p] == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw DomainError("automaton JSON malformed at byte " + std::to_string(e.byte));
        }
        return dra_from_json(j);
    }
    return parse_hoa(text);
}

Dra sequence_dra(const std::vector<std::string>& goals) {
    Dra d;
    const int k = static_cast<int>(goals.size());
    if (k == 0) throw DomainError("sequence automaton needs at least one goal");
    for (const auto& g : goals)
        if (std::find(d.ap.begin(), d.ap.end(), g) == d.ap.end()) d.ap.push_back(g);
    std::sort(d.ap.begin(), d.ap.end());
    if (static_cast<int>(d.ap.size()) > kMaxDraAp) throw DomainError("too many goals");
    std::vector<int> bit(k);
    for (int i = 0; i < k; ++i)
        bit[i] = static_cast<int>(std::find(d.ap.begin(), d.ap.end(), goals[i]) - d.ap.begin());
    const LabelSet letters = LabelSet{1} << d.ap.size();
    for (int q = 0; q <= k; ++q) {
        d.state_names.push_back("q" + std::to_string(q));
        std::vector<int> row(letters);
        for (LabelSet l = 0; l < letters; ++l) {
            int r = q;
            while (r < k && (l >> bit[r] & 1)) ++r;
            row[l] = r;
        }
        d.delta.push_back(std::move(row));
    }
    d.initial = 0;
    d.pairs.push_back({{}, {k}});
    return d;
}

Dra persistence_avoid_dra(const std::string& target, const std::string& avoid) {
    if (target == avoid) throw DomainError("target and avoid propositions must differ");
    Dra d;
    d.ap = {target, avoid};
    d.state_names = {"q0", "qN", "qT", "qB"};
    d.initial = 0;
    for (int q = 0; q < 4; ++q) {
        std::vector<int> row(4);
        for (LabelSet l = 0; l < 4; ++l) {
            if (q == 3 || (l & 2)) row[l] = 3;
            else if (l & 1) row[l] = 2;
            else row[l] = 1;
        }
        d.delta.push_back(std::move(row));
    }
    d.pairs.push_back({{0, 1, 3}, {2}});
    return d;
}

bool accepts_lasso(const Dra& d, const std::vector<LabelSet>& prefix, const std::vector<LabelSet>& cycle) {
    if (cycle.empty()) throw DomainError("lasso cycle must be nonempty");
    int q = d.initial;
    for (LabelSet l : prefix) q = d.next(q, l);
    // Iterate the cycle until the state at the cycle start repeats.
    std::map<int, int> seen;
    std::vector<int> starts;
    while (!seen.count(q)) {
        seen[q] = static_cast<int>(starts.size());
        starts.push_back(q);
        for (LabelSet l : cycle) q = d.next(q, l);
    }
    // States visited infinitely often: those along cycle passes from the repeat on.
    std::set<int> inf;
    int r = q;
    do {
        for (LabelSet l : cycle) {
            r = d.next(r, l);
            inf.insert(r);
        }
    } while (r != q);
    for (const auto& p : d.pairs) {
        bool hits_j = false, hits_k = false;
        for (int s : inf) {
            if (std::binary_search(p.J.begin(), p.J.end(), s)) hits_j = true;
            if (std::binary_search(p.K.begin(), p.K.end(), s)) hits_k = true;
        }
        if (!hits_j && hits_k) return true;
    }
    return false;
}

}  // namespace maxent
