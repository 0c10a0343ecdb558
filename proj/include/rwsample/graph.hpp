#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rwsample {

using NodeId = std::uint32_t;
using ExternalId = std::uint64_t;

/// Raised for malformed edge-list input. Carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string &what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class EmptyGraphError : public std::runtime_error {
public:
    EmptyGraphError() : std::runtime_error("edge list contains no edges") {}
};

/**
 * Immutable undirected simple graph in compressed adjacency form.
 *
 * Node ids are dense (0..n-1). Each neighbor list is sorted and free of
 * duplicates and self-loops; the original external id of every node is kept
 * for reporting.
 */
class Graph {
public:
    Graph() = default;

    /// Builds from undirected edges over dense ids [0, labels.size()).
    /// Edges must be simple (no self-loops, no duplicates in either orientation).
    static Graph from_edges(std::vector<ExternalId> labels,
                            std::span<const std::pair<NodeId, NodeId>> edges);

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

    std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::span<const NodeId> neighbors(NodeId v) const noexcept {
        return {neighbors_.data() + offsets_[v], degree(v)};
    }
    /// Concatenated adjacency; entry i belongs to the node owning offset range containing i.
    std::span<const NodeId> adjacency() const noexcept { return neighbors_; }

    bool has_edge(NodeId u, NodeId v) const noexcept;

    ExternalId external_id(NodeId v) const noexcept { return labels_[v]; }
    std::span<const ExternalId> labels() const noexcept { return labels_; }

    std::size_t max_degree() const noexcept;
    std::size_t min_degree() const noexcept;
    std::vector<std::size_t> degrees() const;

    bool empty() const noexcept { return labels_.empty(); }

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> neighbors_;
    std::vector<ExternalId> labels_;
};

struct IngestReport {
    std::size_t kept_edges = 0;
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicates = 0;
    std::size_t comment_lines = 0;
};

struct ParsedGraph {
    Graph graph;
    IngestReport report;
};

/**
 * Reads a whitespace separated edge list ("u v" per line).
 *
 * Lines starting with '#' and blank lines are skipped. Commas are accepted as
 * separators so the comma-separated variants of the same datasets load
 * unchanged. External ids are densified in first-appearance order; ids that
 * only occur in dropped self-loops are not registered.
 */
ParsedGraph parse_edge_list(std::istream &in);
ParsedGraph load_edge_list(const std::string &path);

/// Writes "u v" lines using external ids, each edge once.
void write_edge_list(const Graph &g, std::ostream &out);

/// Induced subgraph on the largest connected component. Ties go to the
/// component holding the smallest node id. Ids are re-densified in the old
/// id order and labels carried over.
Graph largest_connected_component(const Graph &g);

bool is_connected(const Graph &g);

double average_degree(const Graph &g);

struct GraphStats {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t max_degree = 0;
    double tvd_srw_vs_uniform = 0.0;
};

GraphStats graph_stats(const Graph &g);

} // namespace rwsample
