#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rwsample/graph.hpp"

namespace rwsample {

enum class SamplerKind { srw, rwe, md, gmd, wjrw };

std::string_view to_string(SamplerKind kind) noexcept;
/// Accepts the lowercase names used on the command line ("srw", "wjrw", ...).
std::optional<SamplerKind> parse_sampler_kind(std::string_view name) noexcept;

enum class StartPolicy { uniform, fixed, degree_proportional };

/**
 * Which walk to run and how long.
 *
 * alpha is the jump weight of RWE; C is the degree threshold of GMD and WJRW.
 * MD leaves C empty and binds it to the graph's maximum degree when a
 * TransitionModel is built.
 */
struct WalkConfig {
    SamplerKind kind = SamplerKind::srw;
    std::optional<double> alpha;
    std::optional<std::uint64_t> C;
    std::uint64_t budget = 1;
    std::uint64_t seed = 0;
    StartPolicy start = StartPolicy::uniform;
    NodeId start_node = 0;
    std::uint64_t burn_in = 0;

    static WalkConfig srw();
    static WalkConfig rwe(double alpha);
    static WalkConfig md();
    static WalkConfig gmd(std::uint64_t C);
    static WalkConfig wjrw(std::uint64_t C);

    /// Throws std::invalid_argument when parameters do not match the kind.
    void validate() const;
};

/// Nodes with degree below C, the targets of a WJRW jump.
struct JumpSet {
    std::vector<NodeId> members;
    std::uint64_t total_alpha = 0;

    std::size_t size() const noexcept { return members.size(); }
    bool contains(NodeId v) const noexcept;
};

JumpSet jump_set(const Graph &g, std::uint64_t C);

class NoOutgoingTransition : public std::domain_error {
public:
    explicit NoOutgoingTransition(NodeId v);
};

using Rng = std::mt19937_64;

/// Seed of repetition `stream` under `base_seed` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream) noexcept;
inline constexpr std::string_view kRngName = "mt19937_64/splitmix64-derived";

/**
 * A walk bound to one graph: the resolved C, the jump set, and cheap
 * per-node queries. Holds a reference to the graph, which must outlive it.
 */
class TransitionModel {
public:
    TransitionModel(const Graph &g, const WalkConfig &config);

    const Graph &graph() const noexcept { return *graph_; }
    const WalkConfig &config() const noexcept { return config_; }
    SamplerKind kind() const noexcept { return config_.kind; }
    /// Bound threshold; MD reports d_max here.
    std::uint64_t threshold() const noexcept { return threshold_; }
    double alpha() const noexcept { return alpha_; }
    const JumpSet &jumps() const noexcept { return jumps_; }

    /// Dense row v of the transition matrix.
    std::vector<double> row(NodeId v) const;
    /// P(v, v).
    double stay_probability(NodeId v) const;
    /// Draws the successor of v without materializing the row.
    NodeId step(NodeId v, Rng &rng) const;
    NodeId draw_start(Rng &rng) const;

    /// One step of the distribution: out = in * P. Jump mass is spread as a rank-one term.
    void propagate(std::span<const double> in, std::span<double> out) const;

private:
    // max{C, d_v} for the padded samplers.
    std::uint64_t padded_degree(NodeId v) const noexcept;

    const Graph *graph_;
    WalkConfig config_;
    std::uint64_t threshold_ = 0;
    double alpha_ = 0.0;
    JumpSet jumps_;
};

std::vector<double> transition_row(const Graph &g, const WalkConfig &config, NodeId v);
NodeId step(const TransitionModel &model, NodeId v, Rng &rng);

struct Trace {
    std::vector<NodeId> nodes;
    WalkConfig config;
    NodeId start = 0;
};

/// Deterministic in (graph, config): the config seed drives the only RNG.
Trace run_walk(const Graph &g, const WalkConfig &config);
Trace run_walk(const TransitionModel &model);

/// Stationary distribution from the closed-form weights (for WJRW the
/// virtual-node degree formula, exact only when every jump-set member has
/// the same degree).
std::vector<double> stationary_closed_form(const Graph &g, const WalkConfig &config);
std::vector<double> stationary_closed_form(const TransitionModel &model);

class NotConverged : public std::runtime_error {
public:
    NotConverged(std::size_t iterations, double residual);
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

struct StationaryOptions {
    double tol = 1e-12;
    std::size_t max_iters = 1'000'000;
};

/// Fixed point of pi <- pi (I + P)/2 until ||pi P - pi||_1 <= tol.
std::vector<double> stationary_numeric(const Graph &g, const WalkConfig &config,
                                       StationaryOptions options = {});
std::vector<double> stationary_numeric(const TransitionModel &model,
                                       StationaryOptions options = {});

} // namespace rwsample
