#include "maxent/simulate.hpp"

#include <cmath>
#include <map>

#include "maxent/entropy.hpp"
#include "maxent/error.hpp"
#include "maxent/graph.hpp"

namespace maxent {

Philox4x32::Block Philox4x32::operator()(Block ctr) const {
    constexpr std::uint32_t kM0 = 0xD2511F53, kM1 = 0xCD9E8D57;
    constexpr std::uint32_t kW0 = 0x9E3779B9, kW1 = 0xBB67AE85;
    auto key = key_;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        Block next{static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        ctr = next;
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

std::array<double, 2> Philox4x32::uniforms(std::uint64_t a, std::uint64_t b) const {
    Block out = (*this)({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                         static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)});
    auto u = [](std::uint32_t hi, std::uint32_t lo) {
        std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 21) ^ (lo >> 11);
        return static_cast<double>(bits & ((std::uint64_t{1} << 53) - 1)) * 0x1.0p-53;
    };
    return {u(out[0], out[1]), u(out[2], out[3])};
}

namespace {

template <typename Row>
int sample(const Row& row, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        acc += row[i];
        if (u < acc) return static_cast<int>(i);
    }
    // Round-off: return the last positive entry.
    for (std::size_t i = row.size(); i-- > 0;)
        if (row[i] > 0.0) return static_cast<int>(i);
    return 0;
}

}  // namespace

SimulationResult simulate(const MarkovChain& chain, int runs, int max_steps, std::uint64_t seed, int keep) {
    if (runs < 1) throw DomainError("simulate: runs must be at least 1");
    if (max_steps < 0) throw DomainError("simulate: max_steps must be nonnegative");
    SimulationResult r;
    r.seed = seed;
    r.runs = runs;
    r.max_steps = max_steps;
    auto dec = bottom_strongly_connected_components(chain);
    r.bsccs = dec.bsccs;
    r.bscc_hits.assign(r.bsccs.size(), 0);
    std::vector<int> bscc_of(chain.num_states(), -1);
    for (std::size_t k = 0; k < r.bsccs.size(); ++k)
        for (int s : r.bsccs[k]) bscc_of[s] = static_cast<int>(k);
    std::vector<std::vector<double>> probs(chain.num_states());
    for (int s = 0; s < chain.num_states(); ++s)
        for (const auto& o : chain.row(s)) probs[s].push_back(o.prob);

    Philox4x32 rng(seed);
    std::map<std::vector<int>, int> counts;
    double time_sum = 0.0, nll_sum = 0.0, nll_sq = 0.0;
    for (int run = 0; run < runs; ++run) {
        std::vector<int> path{chain.initial()};
        double nll = 0.0;
        int s = chain.initial();
        for (int step = 0; step < max_steps && bscc_of[s] < 0; ++step) {
            double u = rng.uniforms(static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(step))[0];
            int i = sample(probs[s], u);
            nll -= std::log2(probs[s][i]);
            s = chain.row(s)[i].target;
            path.push_back(s);
        }
        if (bscc_of[s] >= 0) {
            ++r.absorbed_runs;
            ++r.bscc_hits[bscc_of[s]];
            time_sum += static_cast<double>(path.size() - 1);
            nll_sum += nll;
            nll_sq += nll * nll;
            ++counts[path];
        }
        if (run < keep) r.trajectories.push_back(std::move(path));
    }
    r.distinct_paths = counts.size();
    if (r.absorbed_runs > 0) {
        const double m = r.absorbed_runs;
        r.mean_absorption_time = time_sum / m;
        for (const auto& [p, c] : counts) {
            double f = c / m;
            r.path_entropy_plugin -= f * std::log2(f);
        }
        r.path_entropy_mc = nll_sum / m;
        double var = m > 1 ? std::max(0.0, (nll_sq - m * r.path_entropy_mc * r.path_entropy_mc) / (m - 1)) : 0.0;
        r.path_entropy_mc_stderr = std::sqrt(var / m);
    }
    return r;
}

ControllerSimulation simulate_controller(const Mdp& mdp, const FiniteMemoryController& ctrl, std::span<const int> B,
                                         int runs, int max_steps, std::uint64_t seed, int keep) {
    if (runs < 1) throw DomainError("simulate: runs must be at least 1");
    const ProductMdp& prod = ctrl.product();
    std::vector<char> inB(prod.mdp.num_states(), 0);
    for (int p : B) inB[p] = 1;
    ControllerSimulation out;
    out.seed = seed;
    out.runs = runs;
    Philox4x32 rng(seed);
    for (int run = 0; run < runs; ++run) {
        ControllerRun cr;
        int s = mdp.initial();
        int q = ctrl.initial_memory();
        cr.states.push_back(s);
        cr.memory.push_back(q);
        for (int step = 0;; ++step) {
            int p = prod.state_of(s, q);
            if (p >= 0 && inB[p]) {
                cr.satisfied = true;
                break;
            }
            if (step >= max_steps) break;
            auto u = rng.uniforms(static_cast<std::uint64_t>(run), static_cast<std::uint64_t>(step));
            int a = sample(ctrl.distribution(s, q), u[0]);
            const auto& outcomes = mdp.actions(s)[a].outcomes;
            std::vector<double> w;
            for (const auto& o : outcomes) w.push_back(o.prob);
            int t = outcomes[sample(w, u[1])].target;
            q = ctrl.update(q, t);
            s = t;
            cr.actions.push_back(a);
            cr.states.push_back(s);
            cr.memory.push_back(q);
        }
        if (cr.satisfied) ++out.satisfied;
        if (run < keep) out.kept.push_back(std::move(cr));
    }
    out.frequency = static_cast<double>(out.satisfied) / runs;
    out.stderr_frequency = std::sqrt(out.frequency * (1.0 - out.frequency) / runs);
    return out;
}

}  // namespace maxent
