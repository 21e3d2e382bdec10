#include "maxent/product.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "maxent/entropy.hpp"
#include "maxent/error.hpp"

namespace maxent {

std::vector<LabelSet> dra_letters(const Mdp& mdp, const Dra& dra) {
    std::vector<int> map(dra.ap.size());
    for (std::size_t i = 0; i < dra.ap.size(); ++i) {
        map[i] = mdp.find_ap(dra.ap[i]);
        if (map[i] < 0) throw DomainError("alphabet mismatch: automaton proposition \"" + dra.ap[i] +
                                          "\" is not a proposition of the MDP");
    }
    std::vector<LabelSet> out(mdp.num_states(), 0);
    for (int s = 0; s < mdp.num_states(); ++s)
        for (std::size_t i = 0; i < map.size(); ++i)
            if (mdp.label(s) >> map[i] & 1) out[s] |= LabelSet{1} << i;
    return out;
}

ProductMdp build_product(const Mdp& mdp, const Dra& dra, const ProductOptions& opts) {
    validate_dra(dra);
    const auto letters = dra_letters(mdp, dra);
    const int n = mdp.num_states();
    const int nq = dra.num_states();
    auto key = [nq](int s, int q) { return static_cast<std::size_t>(s) * nq + q; };
    const int s0 = mdp.initial();
    const int q0 = dra.next(dra.initial, letters[s0]);

    std::vector<char> keep(static_cast<std::size_t>(n) * nq, opts.prune ? 0 : 1);
    if (opts.prune) {
        std::deque<std::pair<int, int>> queue{{s0, q0}};
        keep[key(s0, q0)] = 1;
        while (!queue.empty()) {
            auto [s, q] = queue.front();
            queue.pop_front();
            for (const auto& act : mdp.actions(s))
                for (const auto& o : act.outcomes) {
                    if (o.prob <= 0.0) continue;
                    int q2 = dra.next(q, letters[o.target]);
                    if (!keep[key(o.target, q2)]) {
                        keep[key(o.target, q2)] = 1;
                        queue.emplace_back(o.target, q2);
                    }
                }
        }
    }

    ProductMdp p;
    p.dra_states = nq;
    p.index.assign(keep.size(), -1);
    for (int s = 0; s < n; ++s)
        for (int q = 0; q < nq; ++q)
            if (keep[key(s, q)]) {
                p.index[key(s, q)] = static_cast<int>(p.origin.size());
                p.origin.emplace_back(s, q);
            }
    const int np = static_cast<int>(p.origin.size());
    std::vector<std::string> names(np);
    std::vector<LabelSet> labels(np);
    std::vector<std::vector<Action>> actions(np);
    for (int i = 0; i < np; ++i) {
        auto [s, q] = p.origin[i];
        names[i] = mdp.state_name(s) + "|" + dra.state_names[q];
        labels[i] = mdp.label(s);
        for (const auto& act : mdp.actions(s)) {
            Action pa{act.name, {}};
            for (const auto& o : act.outcomes)
                pa.outcomes.push_back({p.index[key(o.target, dra.next(q, letters[o.target]))], o.prob});
            actions[i].push_back(std::move(pa));
        }
    }
    p.mdp = Mdp(std::move(names), p.index[key(s0, q0)], mdp.ap(), std::move(labels), std::move(actions));
    for (const auto& pair : dra.pairs) {
        RabinPair lifted;
        for (int i = 0; i < np; ++i) {
            int q = p.origin[i].second;
            if (std::find(pair.J.begin(), pair.J.end(), q) != pair.J.end()) lifted.J.push_back(i);
            if (std::find(pair.K.begin(), pair.K.end(), q) != pair.K.end()) lifted.K.push_back(i);
        }
        p.pairs.push_back(std::move(lifted));
    }
    return p;
}

std::vector<int> accepting_mecs(const ProductMdp& product, const MecDecomposition& mecs) {
    std::vector<int> out;
    for (int k = 0; k < static_cast<int>(mecs.mecs.size()); ++k) {
        const auto& c = mecs.mecs[k];
        for (const auto& pair : product.pairs) {
            auto meets = [&](const std::vector<int>& set) {
                return std::any_of(c.begin(), c.end(),
                                   [&](int s) { return std::binary_search(set.begin(), set.end(), s); });
            };
            if (!meets(pair.J) && meets(pair.K)) {
                out.push_back(k);
                break;
            }
        }
    }
    return out;
}

std::size_t count_edges(const Mdp& mdp) {
    std::size_t total = 0;
    for (int s = 0; s < mdp.num_states(); ++s) total += mdp.successors_all(s).size();
    return total;
}

std::size_t count_action_transitions(const Mdp& mdp) {
    std::size_t total = 0;
    for (int s = 0; s < mdp.num_states(); ++s)
        for (int a = 0; a < mdp.num_actions(s); ++a) total += mdp.successors(s, a).size();
    return total;
}

FiniteMemoryController::FiniteMemoryController(const Mdp& mdp, const Dra& dra, const ProductMdp& product,
                                               StationaryPolicy product_policy)
    : dra_(dra), product_(product), letters_(dra_letters(mdp, dra)), policy_(std::move(product_policy)) {
    if (static_cast<int>(policy_.dist.size()) != product_.mdp.num_states())
        throw DomainError("product policy size does not match the product");
    num_actions_.resize(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) num_actions_[s] = mdp.num_actions(s);
    initial_memory_ = dra_.next(dra_.initial, letters_[mdp.initial()]);
}

std::vector<double> FiniteMemoryController::distribution(int s, int q) const {
    int p = product_.state_of(s, q);
    if (p >= 0) return policy_.dist[p];
    std::vector<double> d(num_actions_[s], 0.0);
    if (!d.empty()) d[0] = 1.0;
    return d;
}

bool FiniteMemoryController::deterministic() const {
    for (const auto& row : policy_.dist)
        for (double v : row)
            if (v > 0.0 && v < 1.0) return false;
    return true;
}

std::vector<MemoryUpdate> FiniteMemoryController::update_table() const {
    std::set<LabelSet> seen(letters_.begin(), letters_.end());
    std::vector<MemoryUpdate> out;
    for (int q = 0; q < dra_.num_states(); ++q)
        for (LabelSet l : seen) out.push_back({q, l, dra_.next(q, l)});
    return out;
}

bool closed_under(const MarkovChain& chain, std::span<const int> B) {
    std::vector<char> in(chain.num_states(), 0);
    for (int s : B) in[s] = 1;
    for (int s : B)
        for (const auto& o : chain.row(s))
            if (!in[o.target]) return false;
    return true;
}

namespace {

std::vector<int> set_union(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

std::vector<char> mask(int n, const std::vector<int>& v) {
    std::vector<char> m(n, 0);
    for (int s : v) m[s] = 1;
    return m;
}

// When beta equals the maximal reach probability, every state visited with
// positive probability must use actions that preserve its maximal value.
// Removing the others up front drops variables that are zero at every
// feasible point.
struct ActionRestriction {
    Mdp mdp;
    std::vector<std::vector<int>> kept;  // [s] -> original action indices
};

ActionRestriction restrict_to_value_preserving(const Mdp& m, const std::vector<double>& x) {
    constexpr double kTol = 1e-8;
    ActionRestriction r;
    std::vector<std::vector<Action>> actions(m.num_states());
    r.kept.resize(m.num_states());
    for (int s = 0; s < m.num_states(); ++s) {
        for (int a = 0; a < m.num_actions(s); ++a) {
            double v = 0.0;
            for (const auto& o : m.actions(s)[a].outcomes) v += o.prob * x[o.target];
            if (v >= x[s] - kTol) r.kept[s].push_back(a);
        }
        if (r.kept[s].empty())
            for (int a = 0; a < m.num_actions(s); ++a) r.kept[s].push_back(a);
        for (int a : r.kept[s]) actions[s].push_back(m.actions(s)[a]);
    }
    r.mdp = Mdp(m.state_names(), m.initial(), m.ap(), m.labels(), std::move(actions));
    return r;
}

void expand(SolutionVector& sol, const Mdp& m, const std::vector<std::vector<int>>& kept) {
    auto widen = [&](std::vector<std::vector<double>>& v) {
        if (v.empty()) return;
        std::vector<std::vector<double>> out(m.num_states());
        for (int s = 0; s < m.num_states(); ++s) {
            out[s].assign(m.num_actions(s), 0.0);
            for (std::size_t i = 0; i < kept[s].size() && i < v[s].size(); ++i) out[s][kept[s][i]] = v[s][i];
        }
        v = std::move(out);
    };
    widen(sol.lambda_sa);
    widen(sol.ray);
}

}  // namespace

double max_satisfaction_probability(const Mdp& mdp, const Dra& dra) {
    auto prod = build_product(mdp, dra);
    auto dec = maximal_end_components(prod.mdp);
    std::vector<int> B;
    for (int k : accepting_mecs(prod, dec)) B = set_union(std::move(B), dec.mecs[k]);
    return B.empty() ? 0.0 : max_reach_probability(prod.mdp, B);
}

ConstrainedResult synthesize_constrained(const Mdp& mdp, const Dra& dra, const ConstrainedOptions& opts) {
    auto rep = validate_mdp(mdp);
    if (!rep.ok()) throw DomainError("invalid MDP: " + rep.violations.front());
    if (!(opts.beta > 0.0 && opts.beta <= 1.0)) throw DomainError("beta must lie in (0, 1]");

    ConstrainedResult r;
    r.beta_requested = opts.beta;
    r.product = build_product(mdp, dra);
    const Mdp& pm = r.product.mdp;
    const int n = pm.num_states();
    auto dec = maximal_end_components(pm);
    r.accepting = accepting_mecs(r.product, dec);
    std::vector<int> B;
    for (int k : r.accepting) B = set_union(std::move(B), dec.mecs[k]);
    r.partition = reachability_partition(pm, B);
    r.max_reach = B.empty() ? 0.0 : max_reach_probability(pm, B);
    if (opts.beta > r.max_reach + kBetaMargin)
        throw DomainError("beta " + format_float(opts.beta) + " exceeds the maximal satisfaction probability " +
                          format_float(r.max_reach));
    r.beta_used = std::min(opts.beta, r.max_reach);

    SynthesisResult& res = r.synthesis;
    res.cls = classify_max_entropy(pm, dec);
    const auto inB = mask(n, B);
    const auto inS0 = mask(n, r.partition.S0);
    const auto bsc = bsc_mec_states(pm, dec);

    ProgramOptions base;
    base.beta = r.beta_used;
    base.beta_targets = B;

    std::optional<ActionRestriction> restriction;
    if (!B.empty() && r.beta_used >= r.max_reach - kBetaMargin) {
        restriction = restrict_to_value_preserving(pm, max_reach_probabilities(pm, B));
        res.notes.push_back("beta at the maximal reach probability: non-preserving actions removed");
    }
    auto solve_with = [&](const std::vector<int>& C, const ProgramOptions& po) {
        const Mdp& base_mdp = restriction ? restriction->mdp : pm;
        auto prog = build_program(absorb_states(base_mdp, C), C, po);
        auto sol = solve_program(prog, opts.tol);
        if (restriction) expand(sol, pm, restriction->kept);
        return sol;
    };
    auto finish = [&](const std::vector<int>& C) {
        res.absorbed = C;
        res.policy = extract_policy(pm, res.solution, C);
        for (int s : B) set_uniform(res.policy, s, dec.retained[s]);
    };
    auto check = [&](const SolutionVector& sol) {
        if (sol.status == SolveStatus::Infeasible)
            throw DomainError("constrained program is infeasible (" + sol.detail + ")");
        if (sol.status == SolveStatus::Unbounded)
            throw DomainError("constrained maximum entropy is unbounded: supply ell or gamma");
        if (sol.status == SolveStatus::MaxIterations) res.notes.push_back("solver did not converge: " + sol.detail);
    };
    auto unbounded_route = [&]() {
        std::vector<int> C = set_union(bsc, B);
        ProgramOptions po = base;
        if (opts.gamma) {
            po.gamma = opts.gamma;
            po.ell = opts.ell;
            res.notes.push_back("gamma-capped maximizer");
        } else if (opts.ell) {
            po.objective = ProgramObjective::Feasibility;
            po.ell = opts.ell;
            res.notes.push_back("entropy-floor feasibility route");
        }
        res.solution = solve_with(C, po);
        check(res.solution);
        finish(C);
    };

    switch (res.cls.tag) {
        case EntropyTag::Finite: {
            std::vector<int> C = dec.states_in_mecs();
            res.solution = solve_with(C, base);
            check(res.solution);
            finish(C);
            if (opts.ell || opts.gamma) res.notes.push_back("finite class: ell and gamma ignored");
            break;
        }
        case EntropyTag::Unbounded:
            unbounded_route();
            break;
        case EntropyTag::Infinite: {
            const int star = res.cls.witness_state;
            const int k = res.cls.witness_mec;
            const bool star_bsc = is_bsc_mec(pm, dec, k);
            if (!star_bsc && !inB[star] && !inS0[star]) {
                res.notes.push_back("witness " + pm.state_name(star) +
                                    " lies in a non-bottom MEC of the remainder set: handled as unbounded");
                unbounded_route();
                break;
            }
            std::vector<int> C = set_union(set_union(bsc, B), dec.mecs[k]);
            ProgramOptions po = base;
            po.epsilon = opts.epsilon;
            po.epsilon_states = dec.mecs[k];
            const auto inC = mask(n, C);
            bool open_ec = false;
            for (const auto& m : dec.mecs)
                if (!inC[m.front()]) open_ec = true;
            if (opts.gamma) {
                po.gamma = opts.gamma;
                po.ell = opts.ell;
            } else if (open_ec) {
                po.objective = ProgramObjective::Feasibility;
                po.ell = opts.ell.value_or(0.0);
                res.notes.push_back("non-bottom end component outside C and no gamma: feasibility objective");
            }
            auto sol = solve_with(C, po);
            if (sol.status == SolveStatus::Infeasible) {
                res.notes.push_back("epsilon flow into the witness MEC conflicts with beta: handled as unbounded");
                unbounded_route();
                break;
            }
            res.solution = sol;
            check(res.solution);
            finish(C);
            for (int s : dec.mecs[k]) set_uniform(res.policy, s, dec.retained[s]);
            res.notes.push_back("witness " + pm.state_name(star) + " made stochastic and recurrent");
            break;
        }
    }
    res.objective = res.solution.objective + 0.0;
    auto chain = induce_chain(pm, res.policy);
    res.achieved_entropy = chain_entropy(chain);
    r.beta_achieved = B.empty() ? 0.0 : reach_probability(chain, B);
    r.b_closed = closed_under(chain, B);
    for (int s : B)
        if (s < static_cast<int>(res.solution.lambda_state.size())) r.lambda_b += res.solution.lambda_state[s];
    r.controller = FiniteMemoryController(mdp, dra, r.product, res.policy);
    return r;
}

FiniteMemoryController lift_policy(const Mdp& mdp, const Dra& dra, const ConstrainedResult& result) {
    return FiniteMemoryController(mdp, dra, result.product, result.synthesis.policy);
}

}  // namespace maxent
