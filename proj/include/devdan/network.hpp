#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include "devdan/matrix.hpp"
#include "devdan/streams.hpp"

namespace devdan {

/// Overflow-safe logistic function.
inline double sigmoid(double a) {
    if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
    const double e = std::exp(a);
    return e / (1.0 + e);
}

inline constexpr double kOutputClamp = 1e-12;

inline double clamp_unit(double z) {
    return std::clamp(z, kOutputClamp, 1.0 - kOutputClamp);
}

/// Tied-weight autoencoder with a softmax head. The decoder weight is the
/// transpose of the encoder weight and is never stored separately; growing
/// or pruning a hidden unit touches one column of w, one entry of b and one
/// row of phi.
struct NetworkState {
    Matrix w;                  // n x r encoder weight; decoder uses w^T
    std::vector<double> b;     // r hidden biases
    std::vector<double> c;     // n reconstruction biases
    Matrix phi;                // r x m softmax weight
    std::vector<double> eta;   // m softmax biases

    std::size_t inputs() const { return w.rows(); }
    std::size_t hidden() const { return w.cols(); }
    std::size_t classes() const { return eta.size(); }

    std::size_t parameter_count() const {
        return w.size() + b.size() + c.size() + phi.size() + eta.size();
    }

    /// Scratch state with a single hidden unit: small uniform encoder
    /// weights, hidden bias uniform on [-1,1], everything else zero.
    static NetworkState scratch(std::size_t n, std::size_t m, std::mt19937_64& rng) {
        return with_hidden(n, m, 1, rng);
    }

    /// Fixed-structure state with r0 hidden units, initialized per unit the
    /// same way as the scratch state.
    static NetworkState with_hidden(std::size_t n, std::size_t m, std::size_t r0,
                                    std::mt19937_64& rng) {
        if (n == 0 || m < 2 || r0 == 0)
            throw std::invalid_argument("NetworkState: need n >= 1, m >= 2, r0 >= 1");
        NetworkState s;
        s.w = Matrix(n, r0);
        s.b.resize(r0);
        s.c.assign(n, 0.0);
        s.phi = Matrix(r0, m);
        s.eta.assign(m, 0.0);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        for (std::size_t i = 0; i < r0; ++i) {
            for (std::size_t j = 0; j < n; ++j) s.w(j, i) = 0.01 * unit(rng);
            s.b[i] = unit(rng);
        }
        return s;
    }
};

/// Encoder pass: y_i = sigmoid(x~ . w[:,i] + b_i).
inline std::vector<double> encode(const std::vector<double>& x, const NetworkState& s) {
    if (x.size() != s.inputs()) throw std::invalid_argument("encode: dimension mismatch");
    std::vector<double> y(s.hidden());
    for (std::size_t i = 0; i < s.hidden(); ++i) {
        double a = s.b[i];
        for (std::size_t j = 0; j < s.inputs(); ++j) a += x[j] * s.w(j, i);
        y[i] = sigmoid(a);
    }
    return y;
}

/// Decoder pass through the transposed encoder weight:
/// z_j = sigmoid(sum_i y_i w[j,i] + c_j).
inline std::vector<double> decode(const std::vector<double>& y, const NetworkState& s) {
    if (y.size() != s.hidden()) throw std::invalid_argument("decode: dimension mismatch");
    std::vector<double> z(s.inputs());
    for (std::size_t j = 0; j < s.inputs(); ++j) {
        double a = s.c[j];
        for (std::size_t i = 0; i < s.hidden(); ++i) a += y[i] * s.w(j, i);
        z[j] = sigmoid(a);
    }
    return z;
}

/// Per-feature cross-entropy between the clean input and its reconstruction,
/// summed over features. z is clamped away from {0,1} so the logs stay finite.
inline double reconstruction_loss(const std::vector<double>& x, const std::vector<double>& z) {
    if (x.size() != z.size()) throw std::invalid_argument("reconstruction_loss: dimension mismatch");
    double loss = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double zj = clamp_unit(z[j]);
        loss -= x[j] * std::log(zj) + (1.0 - x[j]) * std::log(1.0 - zj);
    }
    return loss;
}

/// One stochastic gradient step reconstructing the clean input from its
/// corrupted copy. The tied weight receives both its encoder-path and
/// decoder-path gradient contributions. Each sample is visited exactly once.
inline void generative_sgd_step(NetworkState& s, const CorruptedSample& sample, double lr) {
    const std::size_t n = s.inputs();
    const std::size_t r = s.hidden();
    if (sample.clean.size() != n || sample.corrupted.size() != n)
        throw std::invalid_argument("generative_sgd_step: dimension mismatch");

    const std::vector<double> y = encode(sample.corrupted, s);
    const std::vector<double> z = decode(y, s);

    // cross-entropy + sigmoid output: delta at the reconstruction is z - x
    std::vector<double> delta_out(n);
    for (std::size_t j = 0; j < n; ++j) delta_out[j] = clamp_unit(z[j]) - sample.clean[j];

    std::vector<double> delta_hidden(r);
    for (std::size_t i = 0; i < r; ++i) {
        double g = 0.0;
        for (std::size_t j = 0; j < n; ++j) g += delta_out[j] * s.w(j, i);
        delta_hidden[i] = g * y[i] * (1.0 - y[i]);
    }

    for (std::size_t j = 0; j < n; ++j) s.c[j] -= lr * delta_out[j];
    for (std::size_t i = 0; i < r; ++i) s.b[i] -= lr * delta_hidden[i];
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < r; ++i)
            s.w(j, i) -= lr * (sample.corrupted[j] * delta_hidden[i] + y[i] * delta_out[j]);
}

} // namespace devdan
