#include "maxent/observer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>

#include "maxent/entropy.hpp"

namespace maxent {

namespace {

std::vector<double> row_probs(const MarkovChain& chain, int s) {
    std::vector<double> p;
    for (const auto& o : chain.row(s)) p.push_back(o.prob);
    return p;
}

}  // namespace

double probe_count(std::vector<double> probs) {
    const std::size_t n = probs.size();
    if (n <= 1) return 0.0;
    // Stable sort keeps index order among equal probabilities.
    std::stable_sort(probs.begin(), probs.end(), std::greater<double>());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) total += static_cast<double>(i + 1) * probs[i];
    total += static_cast<double>(n - 1) * probs[n - 1];
    return total;
}

double probe_count(const MarkovChain& chain, int s) { return probe_count(row_probs(chain, s)); }

ObserverReport expected_observations(const MarkovChain& chain) {
    ObserverReport r;
    const int n = chain.num_states();
    r.upsilon.resize(n);
    for (int s = 0; s < n; ++s) r.upsilon[s] = probe_count(chain, s);
    r.xi = residence_times(chain).xi;
    double total = 0.0;
    for (int s = 0; s < n; ++s) {
        if (r.upsilon[s] == 0.0 || r.xi[s] == 0.0) continue;
        if (std::isinf(r.xi[s])) {
            r.infinite = true;
            continue;
        }
        total += r.xi[s] * r.upsilon[s];
    }
    r.o_avg = r.infinite ? kInfinity : total;
    return r;
}

double huffman_expected_depth(const std::vector<double>& probs) {
    if (probs.size() <= 1) return 0.0;
    // Each merge adds its combined weight to the expected depth.
    std::priority_queue<double, std::vector<double>, std::greater<double>> heap(probs.begin(), probs.end());
    double total = 0.0;
    while (heap.size() > 1) {
        double a = heap.top();
        heap.pop();
        double b = heap.top();
        heap.pop();
        total += a + b;
        heap.push(a + b);
    }
    return total;
}

double huffman_expected_depth(const MarkovChain& chain, int s) {
    return huffman_expected_depth(row_probs(chain, s));
}

}  // namespace maxent
