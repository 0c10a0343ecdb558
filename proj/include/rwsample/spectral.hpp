#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "rwsample/graph.hpp"
#include "rwsample/walk.hpp"

namespace rwsample {

inline constexpr std::size_t kDenseCap = 4096;

class DenseCapExceeded : public std::length_error {
public:
    DenseCapExceeded(std::size_t n, std::size_t cap);
};

/// Dense row-stochastic transition matrix of a walk on a small graph.
struct WalkMatrix {
    Eigen::MatrixXd entries;
    WalkConfig config;

    std::size_t size() const noexcept { return static_cast<std::size_t>(entries.rows()); }
};

WalkMatrix dense_transition_matrix(const Graph &g, const WalkConfig &config,
                                   std::size_t cap = kDenseCap);

/**
 * Eigenvalues sorted by descending real part (ties by descending imaginary
 * part). `mu` is the real part of the second entry, the signed
 * second-largest eigenvalue; `slem` is the largest modulus once a single
 * eigenvalue nearest to 1 is removed.
 */
struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;
    double mu = 0.0;
    double slem = 0.0;
    bool is_real_spectrum = true;
};

SpectrumReport spectrum(const WalkMatrix &matrix);

/// Stationary expectation of the one-step repeat probability, sum_v pi_v P(v,v).
double expected_repeat_probability(const Graph &g, const WalkConfig &config,
                                   std::span<const double> pi);
double expected_repeat_probability(const TransitionModel &model, std::span<const double> pi);

/// max over pairs of |pi_v P(v,u) - pi_u P(u,v)|; zero for reversible chains.
double reversibility_residual(const WalkMatrix &matrix, std::span<const double> pi);

} // namespace rwsample
