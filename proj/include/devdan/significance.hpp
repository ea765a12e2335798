#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "devdan/network.hpp"
#include "devdan/streams.hpp"

namespace devdan {

/// Closed-form statistical contribution of the whole network for one clean
/// input: squared bias (how far the expected reconstruction sits from the
/// input) and variance (spread of the reconstruction), both reduced to
/// scalars by averaging over features. Raw per-feature variance can come out
/// negative because the hidden squared-expectation shortcut is approximate;
/// those components are clamped at zero and counted.
struct NsEstimate {
    std::vector<double> expected_hidden;
    std::vector<double> expected_output;
    std::vector<double> expected_output_sq;
    double bias_sq = 0.0;
    double variance = 0.0;
    int clamped = 0;
};

/// Moment-matched encoder input: each feature's running mean shrunk by its
/// running spread, mu / sqrt(1 + pi * sigma^2 / 8). The pi here is the
/// mathematical constant from the probit matching of the sigmoid, unrelated
/// to the growth confidence coefficient.
inline std::vector<double> probit_scaled_mean(const RunningStats& stats) {
    if (stats.count() < 2)
        throw std::invalid_argument("probit_scaled_mean: need at least 2 samples");
    const auto& mu = stats.mean();
    const auto sigma = stats.stddev();
    std::vector<double> scaled(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j)
        scaled[j] = mu[j] / std::sqrt(1.0 + std::numbers::pi * sigma[j] * sigma[j] / 8.0);
    return scaled;
}

/// Expected hidden activation under the Gaussian picture of the corrupted
/// inputs: E[y]_i = sigmoid(sum_j scaled_j w[j,i] + b_i).
inline std::vector<double> expected_hidden(const RunningStats& stats, const NetworkState& s) {
    if (stats.dim() != s.inputs())
        throw std::invalid_argument("expected_hidden: dimension mismatch");
    return encode(probit_scaled_mean(stats), s);
}

/// E[z] = sigmoid(E[y] w^T + c); structurally the decoder applied to E[y].
inline std::vector<double> expected_output(const std::vector<double>& e_y,
                                           const NetworkState& s) {
    return decode(e_y, s);
}

/// E[z^2] = sigmoid((E[y] .* E[y]) w^T + c), treating the squared hidden
/// activation's expectation as the square of the expectation.
inline std::vector<double> expected_output_sq(const std::vector<double>& e_y,
                                              const NetworkState& s) {
    std::vector<double> sq(e_y.size());
    for (std::size_t i = 0; i < e_y.size(); ++i) sq[i] = e_y[i] * e_y[i];
    return decode(sq, s);
}

/// Mean squared gap between two vectors.
inline double mean_squared_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

/// Mean of the clamped per-component variances E[v^2] - E[v]^2, with the
/// clamp count reported through `clamped`.
inline double mean_clamped_variance(const std::vector<double>& e_sq,
                                    const std::vector<double>& e, int& clamped) {
    double acc = 0.0;
    for (std::size_t j = 0; j < e.size(); ++j) {
        const double raw = e_sq[j] - e[j] * e[j];
        if (raw < 0.0) ++clamped;
        acc += std::max(0.0, raw);
    }
    return acc / static_cast<double>(e.size());
}

/// Full network-significance estimate for one clean input.
inline NsEstimate ns_estimate(const std::vector<double>& x, const RunningStats& stats,
                              const NetworkState& s) {
    if (x.size() != s.inputs()) throw std::invalid_argument("ns_estimate: dimension mismatch");
    NsEstimate est;
    est.expected_hidden = expected_hidden(stats, s);
    est.expected_output = expected_output(est.expected_hidden, s);
    est.expected_output_sq = expected_output_sq(est.expected_hidden, s);
    est.bias_sq = mean_squared_gap(est.expected_output, x);
    est.variance = mean_clamped_variance(est.expected_output_sq, est.expected_output, est.clamped);
    return est;
}

/// Per-unit significance: the expected activation of each encoder unit under
/// the corrupted-input distribution. The decoder plays no part; a unit whose
/// expected activation is smallest is the pruning candidate.
inline std::vector<double> hidden_significance(const RunningStats& stats,
                                               const NetworkState& s) {
    return expected_hidden(stats, s);
}

} // namespace devdan
