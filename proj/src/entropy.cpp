#include "maxent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "maxent/error.hpp"

namespace maxent {

namespace {

constexpr std::size_t kDenseLimit = 2000;

// Neumaier compensated sum.
struct Accumulator {
    double sum = 0.0, comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) comp += (sum - t) + v;
        else comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

}  // namespace

double local_entropy(const MarkovChain& chain, int s) {
    Accumulator acc;
    for (const auto& o : chain.row(s)) acc.add(plogp(o.prob));
    return std::max(0.0, acc.value());
}

ResidenceVector residence_times(const MarkovChain& chain) {
    const int n = chain.num_states();
    ResidenceVector out;
    out.xi.assign(n, 0.0);
    Digraph g = chain_digraph(chain);
    int init = chain.initial();
    auto reach = reachable_from(g, std::span<const int>(&init, 1));
    auto bscc = bottom_strongly_connected_components(chain);
    std::vector<char> recurrent(n, 0);
    for (const auto& b : bscc.bsccs)
        for (int s : b) recurrent[s] = 1;
    std::vector<int> idx(n, -1);
    for (int s = 0; s < n; ++s) {
        if (!reach[s]) continue;
        if (recurrent[s]) {
            out.xi[s] = kInfinity;
        } else {
            idx[s] = static_cast<int>(out.transient.size());
            out.transient.push_back(s);
        }
    }
    const int m = static_cast<int>(out.transient.size());
    if (m == 0) return out;
    // (I - Q^T) xi = alpha over reachable transient states.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    if (idx[init] >= 0) rhs(idx[init]) = 1.0;
    Eigen::VectorXd xi;
    if (static_cast<std::size_t>(m) <= kDenseLimit) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(m, m);
        for (int i = 0; i < m; ++i)
            for (const auto& o : chain.row(out.transient[i]))
                if (idx[o.target] >= 0) M(idx[o.target], i) -= o.prob;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
        xi = lu.solve(rhs);
        for (int it = 0; it < 2; ++it) xi += lu.solve(rhs - M * xi);
    } else {
        std::vector<Eigen::Triplet<double>> trip;
        for (int i = 0; i < m; ++i) {
            trip.emplace_back(i, i, 1.0);
            for (const auto& o : chain.row(out.transient[i]))
                if (idx[o.target] >= 0) trip.emplace_back(idx[o.target], i, -o.prob);
        }
        Eigen::SparseMatrix<double> M(m, m);
        M.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(M);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("residence-time system is singular");
        xi = lu.solve(rhs);
        for (int it = 0; it < 3; ++it) {
            Eigen::VectorXd r = rhs - M * xi;
            if (r.lpNorm<Eigen::Infinity>() <= 1e-10) break;
            xi += lu.solve(r);
        }
    }
    for (int i = 0; i < m; ++i) {
        if (!std::isfinite(xi(i))) throw std::runtime_error("residence-time system is singular");
        out.xi[out.transient[i]] = std::max(0.0, xi(i));
    }
    return out;
}

std::vector<double> reach_probabilities(const MarkovChain& chain, std::span<const int> targets) {
    const int n = chain.num_states();
    std::vector<double> x(n, 0.0);
    std::vector<char> is_target(n, 0);
    for (int t : targets) {
        if (t < 0 || t >= n) throw DomainError("reach target out of range");
        is_target[t] = 1;
        x[t] = 1.0;
    }
    auto live = can_reach(chain_digraph(chain), targets);
    std::vector<int> idx(n, -1), vars;
    for (int s = 0; s < n; ++s)
        if (live[s] && !is_target[s]) {
            idx[s] = static_cast<int>(vars.size());
            vars.push_back(s);
        }
    const int m = static_cast<int>(vars.size());
    if (m == 0) return x;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) {
        trip.emplace_back(i, i, 1.0);
        for (const auto& o : chain.row(vars[i])) {
            if (is_target[o.target]) rhs(i) += o.prob;
            else if (idx[o.target] >= 0) trip.emplace_back(i, idx[o.target], -o.prob);
        }
    }
    Eigen::SparseMatrix<double> M(m, m);
    M.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success) throw std::runtime_error("reachability system is singular");
    Eigen::VectorXd sol = lu.solve(rhs);
    for (int it = 0; it < 2; ++it) sol += lu.solve(rhs - M * sol);
    for (int i = 0; i < m; ++i) x[vars[i]] = std::clamp(sol(i), 0.0, 1.0);
    return x;
}

double reach_probability(const MarkovChain& chain, std::span<const int> targets) {
    return reach_probabilities(chain, targets)[chain.initial()];
}

double chain_entropy(const MarkovChain& chain) {
    auto res = residence_times(chain);
    for (int s = 0; s < chain.num_states(); ++s)
        if (std::isinf(res.xi[s]) && chain.row(s).size() > 1) return kInfinity;
    Accumulator acc;
    for (int s : res.transient) acc.add(res.xi[s] * local_entropy(chain, s));
    return acc.value();
}

const char* to_string(EntropyTag t) {
    switch (t) {
        case EntropyTag::Finite: return "finite";
        case EntropyTag::Infinite: return "infinite";
        case EntropyTag::Unbounded: return "unbounded";
    }
    return "unknown";
}

EntropyClass classify_max_entropy(const Mdp& mdp) {
    return classify_max_entropy(mdp, maximal_end_components(mdp));
}

EntropyClass classify_max_entropy(const Mdp& mdp, const MecDecomposition& mecs) {
    EntropyClass out;
    out.mecs = mecs;
    for (int s = 0; s < mdp.num_states(); ++s) {
        if (mecs.membership[s] < 0) continue;
        if (mdp.successors(s, mecs.retained[s]).size() > 1) {
            out.tag = EntropyTag::Infinite;
            out.witness_state = s;
            out.witness_mec = mecs.membership[s];
            return out;
        }
    }
    for (int k = 0; k < static_cast<int>(mecs.mecs.size()); ++k) {
        if (!is_bsc_mec(mdp, mecs, k)) {
            out.tag = EntropyTag::Unbounded;
            out.witness_mec = k;
            return out;
        }
    }
    out.tag = EntropyTag::Finite;
    return out;
}

PathEntropyResult enumerate_path_entropy(const MarkovChain& chain, double mass_cutoff,
                                         std::uint64_t node_cap) {
    if (!(mass_cutoff > 0.0 && mass_cutoff < 1.0))
        throw DomainError("mass cutoff must lie in (0,1)");
    auto bscc = bottom_strongly_connected_components(chain);
    std::vector<char> absorbing(chain.num_states(), 0);
    for (const auto& b : bscc.bsccs)
        for (int s : b) absorbing[s] = 1;

    // Prefixes that end in the same state with the same probability (the same
    // multiset of transitions, in any order) have identical futures, so they are
    // lumped into one frontier node carrying a multiplicity. Keys quantize -ln p
    // to 2^-40; ascending key order pops the most probable node first.
    using Key = std::pair<std::int64_t, int>;
    struct Node {
        double prob;
        double count;
    };
    std::map<Key, Node> frontier;
    PathEntropyResult out;
    Accumulator entropy, absorbed, residual;
    double paths = 0.0;
    auto visit = [&](double prob, double count, int state) {
        if (absorbing[state]) {
            entropy.add(count * plogp(prob));
            absorbed.add(count * prob);
            paths += count;
            return;
        }
        Key key{std::llround(-std::log(prob) * 0x1p40), state};
        frontier.try_emplace(key, Node{prob, 0.0}).first->second.count += count;
        residual.add(count * prob);
    };
    visit(1.0, 1.0, chain.initial());
    while (!frontier.empty() && residual.value() >= mass_cutoff) {
        auto it = frontier.begin();
        const int state = it->first.second;
        const Node node = it->second;
        frontier.erase(it);
        residual.add(-node.count * node.prob);
        if (++out.expansions > node_cap)
            throw DomainError("path enumeration exceeded the node cap");
        for (const auto& o : chain.row(state))
            if (o.prob > 0.0) visit(node.prob * o.prob, node.count, o.target);
    }
    for (const auto& [key, node] : frontier) out.frontier_paths += node.count;
    out.paths = paths < 1.8e19 ? static_cast<std::uint64_t>(paths) : std::numeric_limits<std::uint64_t>::max();
    out.entropy = entropy.value();
    out.absorbed_mass = absorbed.value();
    out.residual_mass = std::max(0.0, residual.value());
    return out;
}

}  // namespace maxent
