#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rwsample/graph.hpp"

namespace rwsample {

/// Categorical distribution. Support is sorted ascending and unique.
struct Distribution {
    std::vector<std::uint64_t> support;
    std::vector<double> mass;

    /// Dense node distribution: category i carries weights[i].
    static Distribution over_nodes(std::span<const double> weights);
    /// Builds from (category, weight) pairs, merging repeats and normalizing to 1.
    static Distribution from_weights(std::vector<std::pair<std::uint64_t, double>> weights);

    double at(std::uint64_t category) const noexcept;
    std::size_t size() const noexcept { return support.size(); }
};

class ZeroInclusionProbability : public std::domain_error {
public:
    explicit ZeroInclusionProbability(NodeId v);
    NodeId node() const noexcept { return node_; }

private:
    NodeId node_;
};

using NodeWeight = std::function<double(NodeId)>;
using NodeFunction = std::function<double(NodeId)>;

/**
 * Ratio estimate of the node average of f from a walk trace.
 *
 *   sum_s f(s)/pi(s)  /  sum_s 1/pi(s)
 *
 * Every occurrence in the trace counts, repeats included. pi may be
 * unnormalized. Throws ZeroInclusionProbability when pi(s) <= 0 for a
 * visited node, std::invalid_argument on an empty trace.
 */
double ht_ratio_estimate(std::span<const NodeId> trace, const NodeWeight &pi,
                         const NodeFunction &f);

/// Reweighted degree histogram of the trace, normalized. Only degrees that
/// occur in the trace appear in the support.
Distribution degree_distribution_estimate(std::span<const NodeId> trace, const NodeWeight &pi,
                                          const Graph &g);

/// Exact degree distribution of g.
Distribution degree_distribution(const Graph &g);

inline constexpr double kDefaultKlSmoothing = 1e-12;

/**
 * KL(true || estimate) in nats. The estimate is smoothed by adding epsilon to
 * every category of the true support and renormalizing, so categories the
 * walk never reached contribute a large but finite term.
 */
double kl_divergence(const Distribution &truth, const Distribution &estimate,
                     double epsilon = kDefaultKlSmoothing);

/// Half the l1 distance over the union of supports.
double tvd(const Distribution &p, const Distribution &q);
double tvd(std::span<const double> p, std::span<const double> q);

std::size_t unique_count(std::span<const NodeId> trace);

} // namespace rwsample
