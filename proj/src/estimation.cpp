#include "rwsample/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace rwsample {

Distribution Distribution::over_nodes(std::span<const double> weights) {
    Distribution d;
    d.support.resize(weights.size());
    d.mass.assign(weights.begin(), weights.end());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        d.support[i] = i;
    }
    return d;
}

Distribution Distribution::from_weights(std::vector<std::pair<std::uint64_t, double>> weights) {
    std::map<std::uint64_t, double> merged;
    double total = 0.0;
    for (const auto &[k, w] : weights) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("negative or NaN weight in distribution");
        }
        merged[k] += w;
        total += w;
    }
    if (!(total > 0.0)) {
        throw std::invalid_argument("distribution has zero total weight");
    }
    Distribution d;
    d.support.reserve(merged.size());
    d.mass.reserve(merged.size());
    for (const auto &[k, w] : merged) {
        d.support.push_back(k);
        d.mass.push_back(w / total);
    }
    return d;
}

double Distribution::at(std::uint64_t category) const noexcept {
    auto it = std::lower_bound(support.begin(), support.end(), category);
    if (it == support.end() || *it != category) {
        return 0.0;
    }
    return mass[static_cast<std::size_t>(it - support.begin())];
}

ZeroInclusionProbability::ZeroInclusionProbability(NodeId v)
    : std::domain_error("zero inclusion probability at node " + std::to_string(v)), node_(v) {}

namespace {

double checked_inverse(const NodeWeight &pi, NodeId s) {
    double w = pi(s);
    if (!(w > 0.0)) {
        throw ZeroInclusionProbability(s);
    }
    return 1.0 / w;
}

} // namespace

double ht_ratio_estimate(std::span<const NodeId> trace, const NodeWeight &pi,
                         const NodeFunction &f) {
    if (trace.empty()) {
        throw std::invalid_argument("ratio estimate needs a nonempty trace");
    }
    // Centered at the first observation: a constant f comes back exactly.
    const double reference = f(trace.front());
    double weighted = 0.0;
    double normalizer = 0.0;
    for (NodeId s : trace) {
        double inv = checked_inverse(pi, s);
        weighted += (f(s) - reference) * inv;
        normalizer += inv;
    }
    return reference + weighted / normalizer;
}

Distribution degree_distribution_estimate(std::span<const NodeId> trace, const NodeWeight &pi,
                                          const Graph &g) {
    if (trace.empty()) {
        throw std::invalid_argument("degree distribution estimate needs a nonempty trace");
    }
    std::map<std::uint64_t, double> by_degree;
    for (NodeId s : trace) {
        by_degree[g.degree(s)] += checked_inverse(pi, s);
    }
    return Distribution::from_weights({by_degree.begin(), by_degree.end()});
}

Distribution degree_distribution(const Graph &g) {
    std::map<std::uint64_t, double> counts;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        counts[g.degree(v)] += 1.0;
    }
    return Distribution::from_weights({counts.begin(), counts.end()});
}

double kl_divergence(const Distribution &truth, const Distribution &estimate, double epsilon) {
    if (epsilon < 0.0) {
        throw std::invalid_argument("smoothing epsilon must be nonnegative");
    }
    // Smoothed normalizer: the estimate's own mass plus epsilon per true category.
    double total = 0.0;
    for (double q : estimate.mass) {
        total += q;
    }
    total += epsilon * static_cast<double>(truth.size());

    double kl = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        double p = truth.mass[i];
        if (p <= 0.0) {
            continue;
        }
        double q = (estimate.at(truth.support[i]) + epsilon) / total;
        kl += p * std::log(p / q);
    }
    return std::max(kl, 0.0);
}

double tvd(const Distribution &p, const Distribution &q) {
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < p.size() || j < q.size()) {
        if (j == q.size() || (i < p.size() && p.support[i] < q.support[j])) {
            sum += std::abs(p.mass[i++]);
        } else if (i == p.size() || q.support[j] < p.support[i]) {
            sum += std::abs(q.mass[j++]);
        } else {
            sum += std::abs(p.mass[i++] - q.mass[j++]);
        }
    }
    return 0.5 * sum;
}

double tvd(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument("tvd of distributions with different lengths");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        sum += std::abs(p[i] - q[i]);
    }
    return 0.5 * sum;
}

std::size_t unique_count(std::span<const NodeId> trace) {
    std::vector<NodeId> copy(trace.begin(), trace.end());
    std::sort(copy.begin(), copy.end());
    return static_cast<std::size_t>(std::unique(copy.begin(), copy.end()) - copy.begin());
}

} // namespace rwsample
