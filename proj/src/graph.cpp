#include "rwsample/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "rwsample/estimation.hpp"

namespace rwsample {

ParseError::ParseError(std::size_t line, const std::string &what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

Graph Graph::from_edges(std::vector<ExternalId> labels,
                        std::span<const std::pair<NodeId, NodeId>> edges) {
    Graph g;
    const std::size_t n = labels.size();
    g.labels_ = std::move(labels);
    g.offsets_.assign(n + 1, 0);
    for (const auto &[u, v] : edges) {
        if (u >= n || v >= n) {
            throw std::out_of_range("edge endpoint outside node range");
        }
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
    g.neighbors_.resize(g.offsets_.back());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto &[u, v] : edges) {
        g.neighbors_[cursor[u]++] = v;
        g.neighbors_[cursor[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                  g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
    }
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (std::size_t v = 0; v < node_count(); ++v) {
        best = std::max(best, degree(static_cast<NodeId>(v)));
    }
    return best;
}

std::size_t Graph::min_degree() const noexcept {
    if (empty()) {
        return 0;
    }
    std::size_t best = degree(0);
    for (std::size_t v = 1; v < node_count(); ++v) {
        best = std::min(best, degree(static_cast<NodeId>(v)));
    }
    return best;
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> d(node_count());
    for (std::size_t v = 0; v < d.size(); ++v) {
        d[v] = degree(static_cast<NodeId>(v));
    }
    return d;
}

namespace {

bool is_separator(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f' || c == ',';
}

// Splits a line into at most three tokens; the third only signals excess.
std::size_t tokenize(std::string_view line, std::string_view (&tokens)[3]) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < line.size() && count < 3) {
        while (i < line.size() && is_separator(line[i])) {
            ++i;
        }
        if (i == line.size()) {
            break;
        }
        std::size_t start = i;
        while (i < line.size() && !is_separator(line[i])) {
            ++i;
        }
        tokens[count++] = line.substr(start, i - start);
    }
    return count;
}

ExternalId parse_id(std::string_view token, std::size_t line_no) {
    ExternalId value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError(line_no, "expected a nonnegative integer node id, got '" +
                                      std::string(token) + "'");
    }
    return value;
}

} // namespace

ParsedGraph parse_edge_list(std::istream &in) {
    IngestReport report;
    std::unordered_map<ExternalId, NodeId> dense;
    std::vector<ExternalId> labels;
    std::vector<std::pair<NodeId, NodeId>> edges;

    auto intern = [&](ExternalId id) {
        auto [it, inserted] = dense.try_emplace(id, static_cast<NodeId>(labels.size()));
        if (inserted) {
            labels.push_back(id);
        }
        return it->second;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        auto first = view.find_first_not_of(" \t\r\v\f");
        if (first == std::string_view::npos) {
            continue;
        }
        if (view[first] == '#') {
            ++report.comment_lines;
            continue;
        }
        std::string_view tokens[3];
        std::size_t count = tokenize(view, tokens);
        if (count != 2) {
            throw ParseError(line_no, "expected exactly two node ids, found " +
                                          std::string(count > 2 ? "more" : std::to_string(count)));
        }
        ExternalId a = parse_id(tokens[0], line_no);
        ExternalId b = parse_id(tokens[1], line_no);
        if (a == b) {
            ++report.dropped_self_loops;
            continue;
        }
        NodeId u = intern(a);
        NodeId v = intern(b);
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }

    std::sort(edges.begin(), edges.end());
    auto last = std::unique(edges.begin(), edges.end());
    report.dropped_duplicates = static_cast<std::size_t>(edges.end() - last);
    edges.erase(last, edges.end());
    report.kept_edges = edges.size();
    if (edges.empty()) {
        throw EmptyGraphError();
    }
    return {Graph::from_edges(std::move(labels), edges), report};
}

ParsedGraph load_edge_list(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open edge list '" + path + "'");
    }
    try {
        return parse_edge_list(in);
    } catch (const ParseError &e) {
        throw ParseError(e.line(), path + ": " + std::string(e.what()));
    }
}

void write_edge_list(const Graph &g, std::ostream &out) {
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (NodeId u : g.neighbors(v)) {
            if (v < u) {
                out << g.external_id(v) << ' ' << g.external_id(u) << '\n';
            }
        }
    }
}

namespace {

// Component label per node, components numbered in order of their smallest node.
std::vector<std::uint32_t> label_components(const Graph &g, std::uint32_t &count) {
    constexpr auto unset = static_cast<std::uint32_t>(-1);
    std::vector<std::uint32_t> comp(g.node_count(), unset);
    std::vector<NodeId> stack;
    count = 0;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (comp[s] != unset) {
            continue;
        }
        comp[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            for (NodeId u : g.neighbors(v)) {
                if (comp[u] == unset) {
                    comp[u] = count;
                    stack.push_back(u);
                }
            }
        }
        ++count;
    }
    return comp;
}

} // namespace

Graph largest_connected_component(const Graph &g) {
    if (g.empty()) {
        return g;
    }
    std::uint32_t count = 0;
    auto comp = label_components(g, count);
    if (count == 1) {
        return g;
    }
    std::vector<std::size_t> sizes(count, 0);
    for (auto c : comp) {
        ++sizes[c];
    }
    // Strict comparison keeps the earliest component, i.e. the one with the smallest node.
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < count; ++c) {
        if (sizes[c] > sizes[best]) {
            best = c;
        }
    }

    constexpr auto absent = static_cast<NodeId>(-1);
    std::vector<NodeId> remap(g.node_count(), absent);
    std::vector<ExternalId> labels;
    labels.reserve(sizes[best]);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (comp[v] == best) {
            remap[v] = static_cast<NodeId>(labels.size());
            labels.push_back(g.external_id(v));
        }
    }
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (remap[v] == absent) {
            continue;
        }
        for (NodeId u : g.neighbors(v)) {
            if (v < u) {
                edges.emplace_back(remap[v], remap[u]);
            }
        }
    }
    return Graph::from_edges(std::move(labels), edges);
}

bool is_connected(const Graph &g) {
    if (g.empty()) {
        return true;
    }
    std::uint32_t count = 0;
    label_components(g, count);
    return count == 1;
}

double average_degree(const Graph &g) {
    if (g.empty()) {
        throw std::invalid_argument("average degree of an empty graph");
    }
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

GraphStats graph_stats(const Graph &g) {
    if (g.empty()) {
        throw std::invalid_argument("statistics of an empty graph");
    }
    const std::size_t n = g.node_count();
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    std::vector<double> srw(n);
    std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
    for (NodeId v = 0; v < n; ++v) {
        srw[v] = static_cast<double>(g.degree(v)) / two_m;
    }
    return {n, g.edge_count(), g.max_degree(), tvd(srw, uniform)};
}

} // namespace rwsample
