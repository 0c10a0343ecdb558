#include "rwsample/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace rwsample {

namespace {
constexpr double kImagTolerance = 1e-12;
}

DenseCapExceeded::DenseCapExceeded(std::size_t n, std::size_t cap)
    : std::length_error("graph has " + std::to_string(n) +
                        " nodes; dense analysis is limited to " + std::to_string(cap)) {}

WalkMatrix dense_transition_matrix(const Graph &g, const WalkConfig &config, std::size_t cap) {
    const std::size_t n = g.node_count();
    if (n > cap) {
        throw DenseCapExceeded(n, cap);
    }
    TransitionModel model(g, config);
    WalkMatrix m{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                 config};
    for (NodeId v = 0; v < n; ++v) {
        auto row = model.row(v);
        for (std::size_t u = 0; u < n; ++u) {
            m.entries(v, static_cast<Eigen::Index>(u)) = row[u];
        }
    }
    return m;
}

SpectrumReport spectrum(const WalkMatrix &matrix) {
    SpectrumReport report;
    const auto n = matrix.entries.rows();
    if (n == 0) {
        return report;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix.entries, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigenvalue solver did not converge");
    }
    const auto &values = solver.eigenvalues();
    report.eigenvalues.assign(values.data(), values.data() + n);
    std::sort(report.eigenvalues.begin(), report.eigenvalues.end(),
              [](const auto &a, const auto &b) {
                  if (a.real() != b.real()) {
                      return a.real() > b.real();
                  }
                  return a.imag() > b.imag();
              });

    report.is_real_spectrum = std::all_of(report.eigenvalues.begin(), report.eigenvalues.end(),
                                          [](const auto &z) { return std::abs(z.imag()) <= kImagTolerance; });
    report.mu = n > 1 ? report.eigenvalues[1].real() : 0.0;

    auto leading = std::min_element(report.eigenvalues.begin(), report.eigenvalues.end(),
                                    [](const auto &a, const auto &b) {
                                        return std::abs(a - 1.0) < std::abs(b - 1.0);
                                    });
    double slem = 0.0;
    for (auto it = report.eigenvalues.begin(); it != report.eigenvalues.end(); ++it) {
        if (it != leading) {
            slem = std::max(slem, std::abs(*it));
        }
    }
    report.slem = slem;
    return report;
}

double expected_repeat_probability(const TransitionModel &model, std::span<const double> pi) {
    if (pi.size() != model.graph().node_count()) {
        throw std::invalid_argument("distribution length does not match the graph");
    }
    double sum = 0.0;
    for (NodeId v = 0; v < pi.size(); ++v) {
        if (pi[v] != 0.0) {
            sum += pi[v] * model.stay_probability(v);
        }
    }
    return sum;
}

double expected_repeat_probability(const Graph &g, const WalkConfig &config,
                                   std::span<const double> pi) {
    return expected_repeat_probability(TransitionModel(g, config), pi);
}

double reversibility_residual(const WalkMatrix &matrix, std::span<const double> pi) {
    const std::size_t n = matrix.size();
    if (pi.size() != n) {
        throw std::invalid_argument("distribution length does not match the matrix");
    }
    const auto &p = matrix.entries;
    double worst = 0.0;
    for (Eigen::Index v = 0; v < p.rows(); ++v) {
        for (Eigen::Index u = v + 1; u < p.cols(); ++u) {
            const auto vi = static_cast<std::size_t>(v);
            const auto ui = static_cast<std::size_t>(u);
            worst = std::max(worst, std::abs(pi[vi] * p(v, u) - pi[ui] * p(u, v)));
        }
    }
    return worst;
}

} // namespace rwsample
