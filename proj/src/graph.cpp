#include "maxent/graph.hpp"

#include <algorithm>

#include "maxent/conic.hpp"
#include "maxent/error.hpp"

namespace maxent {

std::vector<std::vector<int>> strongly_connected_components(const Digraph& g) {
    const int n = static_cast<int>(g.size());
    std::vector<int> index(n, -1), low(n, 0), stack;
    std::vector<char> on_stack(n, 0);
    std::vector<std::vector<int>> out;
    int counter = 0;
    // (vertex, next edge position)
    std::vector<std::pair<int, std::size_t>> call;
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0) continue;
        call.push_back({root, 0});
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos < g[v].size()) {
                int w = g[v][pos++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::vector<int> comp;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) {
                int parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    return out;
}

Digraph mdp_digraph(const Mdp& mdp) {
    Digraph g(mdp.num_states());
    for (int s = 0; s < mdp.num_states(); ++s) g[s] = mdp.successors_all(s);
    return g;
}

Digraph chain_digraph(const MarkovChain& chain) {
    Digraph g(chain.num_states());
    for (int s = 0; s < chain.num_states(); ++s)
        for (const auto& o : chain.row(s)) g[s].push_back(o.target);
    return g;
}

std::vector<int> MecDecomposition::states_in_mecs() const {
    std::vector<int> out;
    for (std::size_t s = 0; s < membership.size(); ++s)
        if (membership[s] >= 0) out.push_back(static_cast<int>(s));
    return out;
}

MecDecomposition maximal_end_components(const Mdp& mdp) {
    return maximal_end_components(mdp, std::vector<char>(mdp.num_states(), 1));
}

MecDecomposition maximal_end_components(const Mdp& mdp, const std::vector<char>& allowed) {
    const int n = mdp.num_states();
    std::vector<char> alive(allowed.begin(), allowed.end());
    alive.resize(n, 0);
    std::vector<std::vector<int>> acts(n);
    std::vector<std::vector<std::vector<int>>> succ(n);
    for (int s = 0; s < n; ++s) {
        if (!alive[s]) continue;
        succ[s].resize(mdp.num_actions(s));
        for (int a = 0; a < mdp.num_actions(s); ++a) {
            succ[s][a] = mdp.successors(s, a);
            acts[s].push_back(a);
        }
    }
    std::vector<int> comp_of(n, -1);
    for (bool changed = true; changed;) {
        changed = false;
        // Drop actions that can leave the alive set, then states with no actions.
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            auto& A = acts[s];
            auto keep_end = std::remove_if(A.begin(), A.end(), [&](int a) {
                for (int t : succ[s][a])
                    if (!alive[t]) return true;
                return false;
            });
            if (keep_end != A.end()) {
                A.erase(keep_end, A.end());
                changed = true;
            }
            if (A.empty()) {
                alive[s] = 0;
                changed = true;
            }
        }
        if (changed) continue;
        Digraph g(n);
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            for (int a : acts[s])
                for (int t : succ[s][a]) g[s].push_back(t);
        }
        auto comps = strongly_connected_components(g);
        std::fill(comp_of.begin(), comp_of.end(), -1);
        for (std::size_t c = 0; c < comps.size(); ++c)
            for (int s : comps[c]) comp_of[s] = static_cast<int>(c);
        for (int s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            auto& A = acts[s];
            auto keep_end = std::remove_if(A.begin(), A.end(), [&](int a) {
                for (int t : succ[s][a])
                    if (comp_of[t] != comp_of[s]) return true;
                return false;
            });
            if (keep_end != A.end()) {
                A.erase(keep_end, A.end());
                changed = true;
            }
            if (A.empty()) {
                alive[s] = 0;
                changed = true;
            }
        }
    }
    MecDecomposition dec;
    dec.membership.assign(n, -1);
    dec.retained.assign(n, {});
    // Group alive states by component, ordered by smallest state.
    std::vector<int> remap;
    for (int s = 0; s < n; ++s) {
        if (!alive[s]) continue;
        int c = comp_of[s];
        if (c >= static_cast<int>(remap.size())) remap.resize(c + 1, -1);
        if (remap[c] < 0) {
            remap[c] = static_cast<int>(dec.mecs.size());
            dec.mecs.emplace_back();
        }
        dec.mecs[remap[c]].push_back(s);
        dec.membership[s] = remap[c];
        dec.retained[s] = acts[s];
    }
    return dec;
}

bool is_bsc_mec(const Mdp& mdp, const MecDecomposition& dec, int mec) {
    for (int s : dec.mecs.at(mec))
        if (static_cast<int>(dec.retained[s].size()) != mdp.num_actions(s)) return false;
    return true;
}

BsccDecomposition bottom_strongly_connected_components(const MarkovChain& chain) {
    Digraph g = chain_digraph(chain);
    auto comps = strongly_connected_components(g);
    const int n = chain.num_states();
    std::vector<int> comp_of(n, -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (int s : comps[c]) comp_of[s] = static_cast<int>(c);
    BsccDecomposition out;
    std::vector<char> bottom(comps.size(), 1);
    for (int s = 0; s < n; ++s)
        for (int t : g[s])
            if (comp_of[t] != comp_of[s]) bottom[comp_of[s]] = 0;
    for (std::size_t c = 0; c < comps.size(); ++c)
        if (bottom[c]) out.bsccs.push_back(comps[c]);
    std::sort(out.bsccs.begin(), out.bsccs.end());
    for (int s = 0; s < n; ++s)
        if (!bottom[comp_of[s]]) out.transient.push_back(s);
    return out;
}

std::vector<char> reachable_from(const Digraph& g, std::span<const int> sources) {
    std::vector<char> seen(g.size(), 0);
    std::vector<int> stack;
    for (int s : sources)
        if (!seen[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : g[v])
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
    }
    return seen;
}

std::vector<char> can_reach(const Digraph& g, std::span<const int> targets) {
    Digraph rev(g.size());
    for (std::size_t v = 0; v < g.size(); ++v)
        for (int w : g[v]) rev[w].push_back(static_cast<int>(v));
    return reachable_from(rev, targets);
}

StatePartition reachability_partition(const Mdp& mdp, std::span<const int> B) {
    StatePartition part;
    std::vector<char> inB(mdp.num_states(), 0);
    for (int s : B) inB[s] = 1;
    auto reach = can_reach(mdp_digraph(mdp), B);
    for (int s = 0; s < mdp.num_states(); ++s) {
        if (inB[s]) part.B.push_back(s);
        else if (!reach[s]) part.S0.push_back(s);
        else part.Sr.push_back(s);
    }
    return part;
}

std::vector<double> max_reach_probabilities(const Mdp& mdp, std::span<const int> target) {
    const int n = mdp.num_states();
    std::vector<double> value(n, 0.0);
    std::vector<char> inT(n, 0);
    for (int s : target) {
        if (s < 0 || s >= n) throw DomainError("target state out of range");
        inT[s] = 1;
        value[s] = 1.0;
    }
    auto reach = can_reach(mdp_digraph(mdp), target);
    std::vector<int> var(n, -1), maybe;
    for (int s = 0; s < n; ++s)
        if (reach[s] && !inT[s]) {
            var[s] = static_cast<int>(maybe.size());
            maybe.push_back(s);
        }
    const int m = static_cast<int>(maybe.size());
    if (m == 0) return value;

    // minimize sum x  s.t.  x_s - sum_t P(s,a,t) x_t >= P(s,a,T),  x >= 0.
    std::vector<Eigen::Triplet<double>> trip;
    std::vector<double> h;
    int row = 0;
    for (int i = 0; i < m; ++i) trip.emplace_back(row++, i, -1.0), h.push_back(0.0);
    for (int i = 0; i < m; ++i) {
        int s = maybe[i];
        for (int a = 0; a < mdp.num_actions(s); ++a) {
            double to_target = 0.0;
            std::vector<std::pair<int, double>> coef{{i, -1.0}};
            for (const auto& o : mdp.actions(s)[a].outcomes) {
                if (o.prob <= 0.0) continue;
                if (inT[o.target]) to_target += o.prob;
                else if (var[o.target] >= 0) coef.push_back({var[o.target], o.prob});
            }
            for (auto [j, v] : coef) trip.emplace_back(row, j, v);
            h.push_back(-to_target);
            ++row;
        }
    }
    conic::Problem P;
    P.c = Eigen::VectorXd::Ones(m);
    P.A.resize(0, m);
    P.b.resize(0);
    P.G.resize(row, m);
    P.G.setFromTriplets(trip.begin(), trip.end());
    P.h = Eigen::Map<Eigen::VectorXd>(h.data(), row);
    P.cones = {{conic::ConeKind::Nonnegative, row}};
    conic::Settings st;
    st.tol_feas = st.tol_gap_abs = st.tol_gap_rel = 1e-10;
    auto sol = conic::solve(P, st);
    if (sol.status != conic::Status::Optimal && sol.status != conic::Status::NearOptimal)
        throw std::runtime_error("reachability LP failed: " + conic::to_string(sol.status));
    for (int i = 0; i < m; ++i) value[maybe[i]] = std::clamp(sol.x(i), 0.0, 1.0);
    return value;
}

double max_reach_probability(const Mdp& mdp, std::span<const int> target) {
    return max_reach_probabilities(mdp, target)[mdp.initial()];
}

}  // namespace maxent
