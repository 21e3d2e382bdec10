#include "maxent/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maxent/error.hpp"

namespace maxent {

Mdp::Mdp(std::vector<std::string> state_names, int initial, std::vector<std::string> ap,
         std::vector<LabelSet> labels, std::vector<std::vector<Action>> actions)
    : names_(std::move(state_names)),
      initial_(initial),
      ap_(std::move(ap)),
      labels_(std::move(labels)),
      actions_(std::move(actions)) {
    labels_.resize(names_.size(), 0);
    actions_.resize(names_.size());
}

std::size_t Mdp::num_state_actions() const {
    std::size_t n = 0;
    for (const auto& a : actions_) n += a.size();
    return n;
}

std::vector<int> Mdp::successors(int s, int a) const {
    std::vector<int> out;
    for (const auto& o : actions_[s][a].outcomes)
        if (o.prob > 0.0) out.push_back(o.target);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> Mdp::successors(int s, std::span<const int> acts) const {
    std::vector<int> out;
    for (int a : acts)
        for (const auto& o : actions_[s][a].outcomes)
            if (o.prob > 0.0) out.push_back(o.target);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> Mdp::successors_all(int s) const {
    std::vector<int> acts(actions_[s].size());
    for (std::size_t a = 0; a < acts.size(); ++a) acts[a] = static_cast<int>(a);
    return successors(s, acts);
}

int Mdp::find_state(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

int Mdp::find_ap(std::string_view name) const {
    for (std::size_t i = 0; i < ap_.size(); ++i)
        if (ap_[i] == name) return static_cast<int>(i);
    return -1;
}

MarkovChain::MarkovChain(std::vector<std::string> state_names, int initial,
                         std::vector<std::string> ap, std::vector<LabelSet> labels,
                         std::vector<std::vector<Outcome>> rows)
    : names_(std::move(state_names)),
      initial_(initial),
      ap_(std::move(ap)),
      labels_(std::move(labels)),
      rows_(std::move(rows)) {
    labels_.resize(rows_.size(), 0);
    names_.resize(rows_.size());
}

double MarkovChain::prob(int s, int t) const {
    const auto& r = rows_[s];
    auto it = std::lower_bound(r.begin(), r.end(), t,
                               [](const Outcome& o, int v) { return o.target < v; });
    return (it != r.end() && it->target == t) ? it->prob : 0.0;
}

namespace {

std::string where(const Mdp& m, int s, int a) {
    std::ostringstream os;
    os << "(" << m.state_name(s) << "," << m.actions(s)[a].name << ")";
    return os.str();
}

}  // namespace

ValidationReport validate_mdp(const Mdp& mdp) {
    ValidationReport rep;
    const int n = mdp.num_states();
    if (n == 0) {
        rep.violations.push_back("empty state set");
        return rep;
    }
    if (mdp.initial() < 0 || mdp.initial() >= n) {
        rep.violations.push_back("initial state index out of range");
        return rep;
    }
    if (mdp.ap().size() > 64) rep.violations.push_back("more than 64 atomic propositions");
    bool indices_ok = true;
    for (int s = 0; s < n; ++s) {
        if (mdp.num_actions(s) == 0)
            rep.violations.push_back("no actions at state " + mdp.state_name(s));
        if (mdp.ap().size() < 64 && (mdp.label(s) >> mdp.ap().size()) != 0)
            rep.violations.push_back("label out of range at state " + mdp.state_name(s));
        for (int a = 0; a < mdp.num_actions(s); ++a) {
            double sum = 0.0;
            for (const auto& o : mdp.actions(s)[a].outcomes) {
                if (o.target < 0 || o.target >= n) {
                    rep.violations.push_back("target index out of range at " + where(mdp, s, a));
                    indices_ok = false;
                    continue;
                }
                if (!(o.prob >= 0.0 && o.prob <= 1.0))
                    rep.violations.push_back("probability outside [0,1] at " + where(mdp, s, a) +
                                             " -> " + mdp.state_name(o.target));
                sum += o.prob;
            }
            if (std::abs(sum - 1.0) > kStochasticTol)
                rep.violations.push_back("row-stochasticity at " + where(mdp, s, a));
        }
    }
    if (!indices_ok) return rep;
    std::vector<char> seen(n, 0);
    std::vector<int> stack{mdp.initial()};
    seen[mdp.initial()] = 1;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (const auto& act : mdp.actions(s))
            for (const auto& o : act.outcomes)
                if (o.prob > 0.0 && !seen[o.target]) {
                    seen[o.target] = 1;
                    stack.push_back(o.target);
                }
    }
    for (int s = 0; s < n; ++s)
        if (!seen[s]) rep.violations.push_back("unreachable state " + mdp.state_name(s));
    return rep;
}

ValidationReport validate_policy(const Mdp& mdp, const StationaryPolicy& policy) {
    ValidationReport rep;
    if (static_cast<int>(policy.dist.size()) != mdp.num_states()) {
        rep.violations.push_back("policy covers " + std::to_string(policy.dist.size()) +
                                 " states, MDP has " + std::to_string(mdp.num_states()));
        return rep;
    }
    for (int s = 0; s < mdp.num_states(); ++s) {
        const auto& d = policy.dist[s];
        if (static_cast<int>(d.size()) != mdp.num_actions(s)) {
            rep.violations.push_back("action count mismatch at state " + mdp.state_name(s));
            continue;
        }
        double sum = 0.0;
        for (double p : d) {
            if (!(p >= 0.0)) rep.violations.push_back("negative probability at state " + mdp.state_name(s));
            sum += p;
        }
        if (std::abs(sum - 1.0) > kStochasticTol)
            rep.violations.push_back("distribution does not sum to 1 at state " + mdp.state_name(s));
    }
    return rep;
}

MarkovChain induce_chain(const Mdp& mdp, const StationaryPolicy& policy) {
    auto rep = validate_policy(mdp, policy);
    if (!rep.ok()) throw DomainError("policy does not match MDP: " + rep.violations.front());
    const int n = mdp.num_states();
    std::vector<std::vector<Outcome>> rows(n);
    std::vector<double> acc(n, 0.0);
    std::vector<int> touched;
    for (int s = 0; s < n; ++s) {
        touched.clear();
        for (int a = 0; a < mdp.num_actions(s); ++a) {
            double w = policy.dist[s][a];
            if (w <= 0.0) continue;
            for (const auto& o : mdp.actions(s)[a].outcomes) {
                if (o.prob <= 0.0) continue;
                if (acc[o.target] == 0.0) touched.push_back(o.target);
                acc[o.target] += w * o.prob;
            }
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (int t : touched) {
            if (acc[t] > 0.0) rows[s].push_back({t, acc[t]});
            acc[t] = 0.0;
        }
    }
    return MarkovChain(mdp.state_names(), mdp.initial(), mdp.ap(), mdp.labels(), std::move(rows));
}

double path_prefix_probability(const MarkovChain& chain, std::span<const int> prefix) {
    if (prefix.empty()) throw DomainError("empty path prefix");
    if (prefix.front() != chain.initial())
        throw DomainError("path prefix does not start at the initial state");
    double p = 1.0;
    for (std::size_t i = 1; i < prefix.size(); ++i) {
        int s = prefix[i - 1], t = prefix[i];
        if (t < 0 || t >= chain.num_states()) throw DomainError("state index out of range in prefix");
        p *= chain.prob(s, t);
        if (p == 0.0) return 0.0;
    }
    return p;
}

StationaryPolicy deterministic_policy(const Mdp& mdp, std::span<const int> choice) {
    StationaryPolicy pol;
    pol.dist.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) {
        pol.dist[s].assign(mdp.num_actions(s), 0.0);
        pol.dist[s][choice[s]] = 1.0;
    }
    return pol;
}

StationaryPolicy uniform_policy(const Mdp& mdp) {
    StationaryPolicy pol;
    pol.dist.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s)
        pol.dist[s].assign(mdp.num_actions(s), 1.0 / mdp.num_actions(s));
    return pol;
}

}  // namespace maxent
