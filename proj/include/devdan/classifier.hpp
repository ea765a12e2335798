#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "devdan/network.hpp"
#include "devdan/significance.hpp"
#include "devdan/streams.hpp"

namespace devdan {

/// Class probability vector together with its argmax (ties break toward the
/// lowest index).
struct Prediction {
    std::vector<double> probabilities;
    std::size_t argmax = 0;
};

/// Numerically stable softmax (max-logit subtraction).
inline std::vector<double> softmax(const std::vector<double>& logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t o = 0; o < logits.size(); ++o) {
        p[o] = std::exp(logits[o] - mx);
        total += p[o];
    }
    for (auto& v : p) v /= total;
    return p;
}

inline std::vector<double> class_logits(const std::vector<double>& y, const NetworkState& s) {
    std::vector<double> logits(s.classes());
    for (std::size_t o = 0; o < s.classes(); ++o) {
        double a = s.eta[o];
        for (std::size_t i = 0; i < s.hidden(); ++i) a += y[i] * s.phi(i, o);
        logits[o] = a;
    }
    return logits;
}

/// Classification of a clean input: softmax over the encoder's activations.
/// No masking is ever applied here.
inline Prediction predict(const std::vector<double>& x, const NetworkState& s) {
    const std::vector<double> y = encode(x, s);
    Prediction pred;
    pred.probabilities = softmax(class_logits(y, s));
    pred.argmax = static_cast<std::size_t>(
        std::max_element(pred.probabilities.begin(), pred.probabilities.end()) -
        pred.probabilities.begin());
    return pred;
}

/// Cross-entropy between a target distribution and predicted probabilities.
inline double cross_entropy(const std::vector<double>& target,
                            const std::vector<double>& probabilities) {
    if (target.size() != probabilities.size())
        throw std::invalid_argument("cross_entropy: dimension mismatch");
    double loss = 0.0;
    for (std::size_t o = 0; o < target.size(); ++o)
        loss -= target[o] * std::log(clamp_unit(probabilities[o]));
    return loss;
}

/// One supervised gradient step on w, b, phi, eta under cross-entropy,
/// backpropagating through the encoder. Single visit per sample.
inline void discriminative_sgd_step(NetworkState& s, const std::vector<double>& x,
                                    const std::vector<double>& target, double lr) {
    const std::size_t n = s.inputs();
    const std::size_t r = s.hidden();
    const std::size_t m = s.classes();
    if (x.size() != n || target.size() != m)
        throw std::invalid_argument("discriminative_sgd_step: dimension mismatch");

    const std::vector<double> y = encode(x, s);
    const std::vector<double> p = softmax(class_logits(y, s));

    std::vector<double> delta_logit(m);
    for (std::size_t o = 0; o < m; ++o) delta_logit[o] = p[o] - target[o];

    std::vector<double> delta_hidden(r);
    for (std::size_t i = 0; i < r; ++i) {
        double g = 0.0;
        for (std::size_t o = 0; o < m; ++o) g += delta_logit[o] * s.phi(i, o);
        delta_hidden[i] = g * y[i] * (1.0 - y[i]);
    }

    for (std::size_t o = 0; o < m; ++o) s.eta[o] -= lr * delta_logit[o];
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t o = 0; o < m; ++o) s.phi(i, o) -= lr * y[i] * delta_logit[o];
    for (std::size_t i = 0; i < r; ++i) s.b[i] -= lr * delta_hidden[i];
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < r; ++i) s.w(j, i) -= lr * x[j] * delta_hidden[i];
}

/// Squared-predictive-error flavour of the significance estimate: the output
/// expression swaps the decoder for the softmax head, everything else follows
/// the reconstruction derivation.
struct DiscriminativeNs {
    double bias_sq = 0.0;
    double variance = 0.0;
    int clamped = 0;
};

inline DiscriminativeNs discriminative_ns(const std::vector<double>& target,
                                          const RunningStats& stats, const NetworkState& s) {
    if (target.size() != s.classes())
        throw std::invalid_argument("discriminative_ns: target dimension mismatch");
    const std::vector<double> e_y = expected_hidden(stats, s);
    std::vector<double> e_y_sq(e_y.size());
    for (std::size_t i = 0; i < e_y.size(); ++i) e_y_sq[i] = e_y[i] * e_y[i];

    const std::vector<double> e_out = softmax(class_logits(e_y, s));
    const std::vector<double> e_out_sq = softmax(class_logits(e_y_sq, s));

    DiscriminativeNs ns;
    ns.bias_sq = mean_squared_gap(e_out, target);
    ns.variance = mean_clamped_variance(e_out_sq, e_out, ns.clamped);
    return ns;
}

} // namespace devdan
