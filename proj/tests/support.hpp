#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rwsample/graph.hpp"

namespace rwsample::testing {

inline Graph parse(const std::string &text) {
    std::istringstream in(text);
    return parse_edge_list(in).graph;
}

/// Five nodes, degrees (4, 2, 3, 3, 2), seven edges; external ids 1..5 map to 0..4.
inline Graph five_node_graph() { return parse("1 2\n1 3\n1 4\n1 5\n2 4\n3 4\n3 5\n"); }

/// Path 1-2-3.
inline Graph path3() { return parse("1 2\n2 3\n"); }

inline Graph complete_graph(std::size_t n) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            edges.emplace_back(u, v);
        }
    }
    std::vector<ExternalId> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return Graph::from_edges(labels, edges);
}

/// Connected graph: random recursive tree plus each remaining pair with probability p.
inline Graph random_connected_graph(std::size_t n, double p, std::mt19937_64 &rng) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (NodeId v = 1; v < n; ++v) {
        auto u = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
        edges.emplace_back(u, v);
        adj[u][v] = adj[v][u] = true;
    }
    std::bernoulli_distribution coin(p);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (!adj[u][v] && coin(rng)) {
                edges.emplace_back(u, v);
                adj[u][v] = adj[v][u] = true;
            }
        }
    }
    std::vector<ExternalId> labels(n);
    std::iota(labels.begin(), labels.end(), 100);
    return Graph::from_edges(labels, edges);
}

/// Degree sequence with a heavy tail: Chung-Lu style graph, restricted to its largest component.
inline Graph heavy_tailed_graph(std::size_t n, double exponent, double mean_degree,
                                std::mt19937_64 &rng) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = std::pow(static_cast<double>(i + 1), -1.0 / (exponent - 1.0));
    }
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto &x : w) {
        x *= mean_degree * static_cast<double>(n) / total;
    }
    total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (unit(rng) < std::min(1.0, w[u] * w[v] / total)) {
                edges.emplace_back(u, v);
            }
        }
    }
    std::vector<ExternalId> labels(n);
    std::iota(labels.begin(), labels.end(), 0);
    return largest_connected_component(Graph::from_edges(labels, edges));
}

/// Coefficients c_0..c_n of det(lambda I - A) = sum c_k lambda^k (Faddeev-LeVerrier).
inline std::vector<double> characteristic_polynomial(const Eigen::MatrixXd &a) {
    const auto n = a.rows();
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[static_cast<std::size_t>(n)] = 1.0;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(n - k + 1)] * id;
        c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

/// All complex roots of a monic polynomial by Durand-Kerner iteration.
inline std::vector<std::complex<double>> polynomial_roots(const std::vector<double> &c) {
    const std::size_t n = c.size() - 1;
    auto eval = [&](std::complex<double> z) {
        std::complex<double> r = c[n];
        for (std::size_t k = n; k-- > 0;) {
            r = r * z + c[k];
        }
        return r;
    };
    std::vector<std::complex<double>> z(n);
    const std::complex<double> seed(0.4, 0.9);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = std::pow(seed, static_cast<double>(i));
    }
    for (int iter = 0; iter < 5000; ++iter) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            std::complex<double> denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) {
                    denom *= z[i] - z[j];
                }
            }
            auto delta = eval(z[i]) / denom;
            z[i] -= delta;
            change = std::max(change, std::abs(delta));
        }
        if (change < 1e-15) {
            break;
        }
    }
    return z;
}

/// Monic coefficients of prod (lambda - z_i), real parts only (conjugate pairs cancel the rest).
inline std::vector<double> polynomial_from_roots(const std::vector<std::complex<double>> &roots) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto &z : roots) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= z * c[k];
        }
        c = std::move(next);
    }
    std::vector<double> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        out[k] = c[k].real();
    }
    return out;
}

/// Greedy matching distance between two eigenvalue multisets (max over matched pairs).
inline double multiset_distance(std::vector<std::complex<double>> a,
                                std::vector<std::complex<double>> b) {
    double worst = 0.0;
    for (const auto &x : a) {
        auto it = std::min_element(b.begin(), b.end(), [&](const auto &p, const auto &q) {
            return std::abs(p - x) < std::abs(q - x);
        });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

/// Stationary distribution by a dense linear solve of pi (P - I) = 0 with sum(pi) = 1.
inline std::vector<double> stationary_by_solve(const Eigen::MatrixXd &p) {
    const auto n = p.rows();
    Eigen::MatrixXd a = (p - Eigen::MatrixXd::Identity(n, n)).transpose();
    a.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
    return {pi.data(), pi.data() + n};
}

} // namespace rwsample::testing
