#include "rwsample/walk.hpp"

#include <algorithm>
#include <cmath>

namespace rwsample {

std::string_view to_string(SamplerKind kind) noexcept {
    switch (kind) {
    case SamplerKind::srw:
        return "srw";
    case SamplerKind::rwe:
        return "rwe";
    case SamplerKind::md:
        return "md";
    case SamplerKind::gmd:
        return "gmd";
    case SamplerKind::wjrw:
        return "wjrw";
    }
    return "?";
}

std::optional<SamplerKind> parse_sampler_kind(std::string_view name) noexcept {
    for (auto kind : {SamplerKind::srw, SamplerKind::rwe, SamplerKind::md, SamplerKind::gmd,
                      SamplerKind::wjrw}) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

WalkConfig WalkConfig::srw() { return {}; }

WalkConfig WalkConfig::rwe(double alpha) {
    WalkConfig c;
    c.kind = SamplerKind::rwe;
    c.alpha = alpha;
    return c;
}

WalkConfig WalkConfig::md() {
    WalkConfig c;
    c.kind = SamplerKind::md;
    return c;
}

WalkConfig WalkConfig::gmd(std::uint64_t C) {
    WalkConfig c;
    c.kind = SamplerKind::gmd;
    c.C = C;
    return c;
}

WalkConfig WalkConfig::wjrw(std::uint64_t C) {
    WalkConfig c;
    c.kind = SamplerKind::wjrw;
    c.C = C;
    return c;
}

void WalkConfig::validate() const {
    if (alpha.has_value() != (kind == SamplerKind::rwe)) {
        throw std::invalid_argument("alpha must be given for rwe and only for rwe");
    }
    if (alpha && !(*alpha >= 0.0 && std::isfinite(*alpha))) {
        throw std::invalid_argument("alpha must be a finite nonnegative number");
    }
    bool wants_c = kind == SamplerKind::gmd || kind == SamplerKind::wjrw;
    if (C.has_value() != wants_c) {
        throw std::invalid_argument("C must be given for gmd/wjrw and only for them");
    }
    if (C && *C < 1) {
        throw std::invalid_argument("C must be at least 1");
    }
    if (budget < 1) {
        throw std::invalid_argument("budget must be at least 1");
    }
}

bool JumpSet::contains(NodeId v) const noexcept {
    return std::binary_search(members.begin(), members.end(), v);
}

JumpSet jump_set(const Graph &g, std::uint64_t C) {
    JumpSet set;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        std::uint64_t d = g.degree(v);
        if (d < C) {
            set.members.push_back(v);
            set.total_alpha += C - d;
        }
    }
    return set;
}

NoOutgoingTransition::NoOutgoingTransition(NodeId v)
    : std::domain_error("no outgoing transition from isolated node " + std::to_string(v)) {}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t stream) noexcept {
    std::uint64_t z = base_seed + (stream + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

TransitionModel::TransitionModel(const Graph &g, const WalkConfig &config)
    : graph_(&g), config_(config) {
    config_.validate();
    if (g.empty()) {
        throw std::invalid_argument("cannot walk on an empty graph");
    }
    switch (config_.kind) {
    case SamplerKind::srw:
        break;
    case SamplerKind::rwe:
        alpha_ = *config_.alpha;
        break;
    case SamplerKind::md:
        threshold_ = g.max_degree();
        break;
    case SamplerKind::gmd:
        threshold_ = *config_.C;
        break;
    case SamplerKind::wjrw:
        threshold_ = *config_.C;
        jumps_ = jump_set(g, threshold_);
        break;
    }
    if (config_.start == StartPolicy::fixed && config_.start_node >= g.node_count()) {
        throw std::out_of_range("fixed start node outside the graph");
    }
}

std::uint64_t TransitionModel::padded_degree(NodeId v) const noexcept {
    return std::max<std::uint64_t>(threshold_, graph_->degree(v));
}

std::vector<double> TransitionModel::row(NodeId v) const {
    const Graph &g = *graph_;
    const std::size_t n = g.node_count();
    const auto d = static_cast<double>(g.degree(v));
    std::vector<double> p(n, 0.0);
    switch (config_.kind) {
    case SamplerKind::srw:
        if (g.degree(v) == 0) {
            throw NoOutgoingTransition(v);
        }
        for (NodeId u : g.neighbors(v)) {
            p[u] = 1.0 / d;
        }
        break;
    case SamplerKind::rwe: {
        if (g.degree(v) == 0 && alpha_ == 0.0) {
            throw NoOutgoingTransition(v);
        }
        const double jump = alpha_ / ((d + alpha_) * static_cast<double>(n));
        std::fill(p.begin(), p.end(), jump);
        for (NodeId u : g.neighbors(v)) {
            p[u] += 1.0 / (d + alpha_);
        }
        break;
    }
    case SamplerKind::md:
    case SamplerKind::gmd: {
        const auto m = static_cast<double>(padded_degree(v));
        p[v] = (m - d) / m;
        for (NodeId u : g.neighbors(v)) {
            p[u] = 1.0 / m;
        }
        break;
    }
    case SamplerKind::wjrw: {
        const std::uint64_t mi = padded_degree(v);
        const auto m = static_cast<double>(mi);
        if (mi > g.degree(v)) {
            const double jump = (m - d) / (m * static_cast<double>(jumps_.size()));
            for (NodeId u : jumps_.members) {
                p[u] = jump;
            }
        }
        for (NodeId u : g.neighbors(v)) {
            p[u] += 1.0 / m;
        }
        break;
    }
    }
    return p;
}

double TransitionModel::stay_probability(NodeId v) const {
    const auto d = static_cast<double>(graph_->degree(v));
    switch (config_.kind) {
    case SamplerKind::srw:
        return 0.0;
    case SamplerKind::rwe:
        return alpha_ / ((d + alpha_) * static_cast<double>(graph_->node_count()));
    case SamplerKind::md:
    case SamplerKind::gmd: {
        const auto m = static_cast<double>(padded_degree(v));
        return (m - d) / m;
    }
    case SamplerKind::wjrw: {
        const auto m = static_cast<double>(padded_degree(v));
        if (m == d) {
            return 0.0;
        }
        return (m - d) / (m * static_cast<double>(jumps_.size()));
    }
    }
    return 0.0;
}

namespace {

template <class Int>
Int uniform_index(Rng &rng, Int bound) {
    return std::uniform_int_distribution<Int>(0, bound - 1)(rng);
}

} // namespace

NodeId TransitionModel::step(NodeId v, Rng &rng) const {
    const Graph &g = *graph_;
    auto nb = g.neighbors(v);
    const std::uint64_t d = nb.size();
    switch (config_.kind) {
    case SamplerKind::srw:
        if (d == 0) {
            throw NoOutgoingTransition(v);
        }
        return nb[uniform_index<std::uint64_t>(rng, d)];
    case SamplerKind::rwe: {
        if (d == 0 && alpha_ == 0.0) {
            throw NoOutgoingTransition(v);
        }
        double u = std::uniform_real_distribution<double>(0.0, static_cast<double>(d) + alpha_)(rng);
        if (u < alpha_ || d == 0) {
            return static_cast<NodeId>(uniform_index<std::uint64_t>(rng, g.node_count()));
        }
        return nb[uniform_index<std::uint64_t>(rng, d)];
    }
    case SamplerKind::md:
    case SamplerKind::gmd: {
        std::uint64_t k = uniform_index(rng, padded_degree(v));
        return k < d ? nb[k] : v;
    }
    case SamplerKind::wjrw: {
        std::uint64_t k = uniform_index(rng, padded_degree(v));
        if (k < d) {
            return nb[k];
        }
        return jumps_.members[uniform_index<std::size_t>(rng, jumps_.size())];
    }
    }
    return v;
}

NodeId TransitionModel::draw_start(Rng &rng) const {
    const Graph &g = *graph_;
    switch (config_.start) {
    case StartPolicy::fixed:
        return config_.start_node;
    case StartPolicy::degree_proportional: {
        auto adj = g.adjacency();
        if (adj.empty()) {
            throw NoOutgoingTransition(0);
        }
        // A uniform adjacency slot names a node with probability d_v / 2m.
        return adj[uniform_index<std::size_t>(rng, adj.size())];
    }
    case StartPolicy::uniform:
        break;
    }
    return static_cast<NodeId>(uniform_index<std::size_t>(rng, g.node_count()));
}

void TransitionModel::propagate(std::span<const double> in, std::span<double> out) const {
    const Graph &g = *graph_;
    const std::size_t n = g.node_count();
    std::fill(out.begin(), out.end(), 0.0);
    double jump_mass = 0.0;
    for (NodeId v = 0; v < n; ++v) {
        const double mass = in[v];
        if (mass == 0.0) {
            continue;
        }
        const auto d = static_cast<double>(g.degree(v));
        double share = 0.0;
        switch (config_.kind) {
        case SamplerKind::srw:
            if (d == 0.0) {
                throw NoOutgoingTransition(v);
            }
            share = mass / d;
            break;
        case SamplerKind::rwe:
            share = mass / (d + alpha_);
            jump_mass += mass * alpha_ / (d + alpha_);
            break;
        case SamplerKind::md:
        case SamplerKind::gmd: {
            const auto m = static_cast<double>(padded_degree(v));
            share = mass / m;
            out[v] += mass * (m - d) / m;
            break;
        }
        case SamplerKind::wjrw: {
            const auto m = static_cast<double>(padded_degree(v));
            share = mass / m;
            jump_mass += mass * (m - d) / m;
            break;
        }
        }
        for (NodeId u : g.neighbors(v)) {
            out[u] += share;
        }
    }
    if (config_.kind == SamplerKind::rwe) {
        const double each = jump_mass / static_cast<double>(n);
        for (auto &x : out) {
            x += each;
        }
    } else if (config_.kind == SamplerKind::wjrw && !jumps_.members.empty()) {
        const double each = jump_mass / static_cast<double>(jumps_.size());
        for (NodeId u : jumps_.members) {
            out[u] += each;
        }
    }
}

std::vector<double> transition_row(const Graph &g, const WalkConfig &config, NodeId v) {
    if (v >= g.node_count()) {
        throw std::out_of_range("node id outside the graph");
    }
    return TransitionModel(g, config).row(v);
}

NodeId step(const TransitionModel &model, NodeId v, Rng &rng) { return model.step(v, rng); }

Trace run_walk(const TransitionModel &model) {
    const WalkConfig &config = model.config();
    Rng rng(config.seed);
    NodeId current = model.draw_start(rng);
    for (std::uint64_t i = 0; i < config.burn_in; ++i) {
        current = model.step(current, rng);
    }
    Trace trace;
    trace.config = config;
    trace.start = current;
    trace.nodes.reserve(config.budget);
    trace.nodes.push_back(current);
    while (trace.nodes.size() < config.budget) {
        current = model.step(current, rng);
        trace.nodes.push_back(current);
    }
    return trace;
}

Trace run_walk(const Graph &g, const WalkConfig &config) {
    return run_walk(TransitionModel(g, config));
}

std::vector<double> stationary_closed_form(const TransitionModel &model) {
    const Graph &g = model.graph();
    const std::size_t n = g.node_count();
    std::vector<double> w(n);
    const auto &jumps = model.jumps();
    const double jump_bonus = jumps.members.empty()
                                  ? 0.0
                                  : static_cast<double>(jumps.total_alpha) /
                                        static_cast<double>(jumps.size());
    for (NodeId v = 0; v < n; ++v) {
        const auto d = static_cast<double>(g.degree(v));
        switch (model.kind()) {
        case SamplerKind::srw:
            w[v] = d;
            break;
        case SamplerKind::rwe:
            w[v] = d + model.alpha();
            break;
        case SamplerKind::md:
        case SamplerKind::gmd:
            w[v] = static_cast<double>(std::max<std::uint64_t>(model.threshold(), g.degree(v)));
            break;
        case SamplerKind::wjrw:
            w[v] = d + (g.degree(v) < model.threshold() ? jump_bonus : 0.0);
            break;
        }
    }
    double total = 0.0;
    for (double x : w) {
        total += x;
    }
    if (!(total > 0.0)) {
        throw std::domain_error("closed-form stationary weights sum to zero");
    }
    for (auto &x : w) {
        x /= total;
    }
    return w;
}

std::vector<double> stationary_closed_form(const Graph &g, const WalkConfig &config) {
    return stationary_closed_form(TransitionModel(g, config));
}

NotConverged::NotConverged(std::size_t iterations, double residual)
    : std::runtime_error("stationary iteration did not converge after " +
                         std::to_string(iterations) + " iterations (residual " +
                         std::to_string(residual) + ")"),
      residual_(residual) {}

std::vector<double> stationary_numeric(const TransitionModel &model, StationaryOptions options) {
    const std::size_t n = model.graph().node_count();
    std::vector<double> pi(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    double residual = 0.0;
    for (std::size_t it = 0; it < options.max_iters; ++it) {
        model.propagate(pi, next);
        residual = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            residual += std::abs(next[v] - pi[v]);
        }
        if (residual <= options.tol) {
            return pi;
        }
        // Lazy step (I + P)/2: same fixed point, no periodic oscillation.
        double total = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            pi[v] = 0.5 * (pi[v] + next[v]);
            total += pi[v];
        }
        for (auto &x : pi) {
            x /= total;
        }
    }
    throw NotConverged(options.max_iters, residual);
}

std::vector<double> stationary_numeric(const Graph &g, const WalkConfig &config,
                                       StationaryOptions options) {
    return stationary_numeric(TransitionModel(g, config), options);
}

} // namespace rwsample
