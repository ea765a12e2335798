#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "devdan/classifier.hpp"
#include "devdan/network.hpp"
#include "devdan/significance.hpp"
#include "devdan/streams.hpp"
#include "devdan/structure.hpp"

namespace devdan {

enum class Variant { devdan, fixed_ae, fixed_dae };

inline const char* to_string(Variant v) {
    switch (v) {
    case Variant::devdan: return "devdan";
    case Variant::fixed_ae: return "fixed-ae";
    default: return "fixed-dae";
    }
}

inline Variant variant_from_string(const std::string& name) {
    if (name == "devdan") return Variant::devdan;
    if (name == "fixed-ae") return Variant::fixed_ae;
    if (name == "fixed-dae") return Variant::fixed_dae;
    throw std::invalid_argument("unknown variant '" + name + "'");
}

struct LearnerConfig {
    Variant variant = Variant::devdan;
    double corruption_prob = 0.1;
    double lr_generative = 0.05;
    double lr_discriminative = 0.05;
    std::size_t fixed_hidden = 10;   // only the fixed variants use this
    std::uint64_t seed = 1;
};

/// Optional per-sample significance trace record.
struct NsTraceRecord {
    std::size_t timestamp = 0;
    std::size_t step = 0;
    Phase phase = Phase::generative;
    double bias_sq = 0.0;
    double variance = 0.0;
};

/// Single-owner prequential learner: scores a batch, then runs the
/// unsupervised pass over corrupted inputs, then the supervised pass once
/// labels are revealed. The evolving variant estimates the network
/// significance each sample, drives the grow/prune triggers from
/// phase-local trackers (growth takes precedence; at most one structural
/// mutation per sample), and only then takes the gradient step.
class Learner {
public:
    Learner(std::size_t n, std::size_t m, const LearnerConfig& config)
        : config_(config), rng_(config.seed), stats_(n) {
        if (config.corruption_prob < 0.0 || config.corruption_prob >= 1.0)
            throw std::invalid_argument("Learner: corruption_prob must lie in [0,1)");
        state_ = config.variant == Variant::devdan
                     ? NetworkState::scratch(n, m, rng_)
                     : NetworkState::with_hidden(n, m, config.fixed_hidden, rng_);
    }

    /// Prequential test pass: fraction of correct argmax predictions. Labels
    /// are read for scoring only.
    double test_batch(const DataBatch& batch) const {
        if (batch.size() == 0) throw std::invalid_argument("test_batch: empty batch");
        std::size_t correct = 0;
        for (std::size_t t = 0; t < batch.size(); ++t) {
            const Prediction pred = predict(batch.features[t], state_);
            if (pred.argmax == static_cast<std::size_t>(batch.labels[t])) ++correct;
        }
        return static_cast<double>(correct) / static_cast<double>(batch.size());
    }

    /// Unsupervised pass; labels in the batch are ignored here.
    void train_generative(const DataBatch& batch) {
        for (std::size_t t = 0; t < batch.size(); ++t) {
            const auto& x = batch.features[t];
            CorruptedSample sample;
            if (config_.variant == Variant::fixed_ae) {
                sample.clean = x;
                sample.corrupted = x;
                sample.mask.assign(x.size(), false);
            } else {
                sample = mask_noise(x, config_.corruption_prob, rng_);
                ++mask_calls_;
            }
            if (config_.variant == Variant::devdan) {
                stats_.update(sample.corrupted);
                if (stats_.count() >= 2) {
                    const NsEstimate ns = ns_estimate(x, stats_, state_);
                    variance_clamp_events_ += ns.clamped;
                    trace(Phase::generative, ns.bias_sq, ns.variance);
                    if (std::isfinite(ns.bias_sq) && std::isfinite(ns.variance)) {
                        structural_step(gen_bias_, gen_var_, ns.bias_sq, ns.variance, x,
                                        sample.corrupted, Phase::generative, t);
                    } else {
                        ++divergence_events_;
                    }
                }
            }
            generative_sgd_step(state_, sample, config_.lr_generative);
            ++step_;
        }
    }

    /// Supervised pass over the now-labelled batch.
    void train_discriminative(const DataBatch& batch) {
        for (std::size_t t = 0; t < batch.size(); ++t) {
            const auto& x = batch.features[t];
            const std::vector<double> target = one_hot(batch.labels[t], state_.classes());
            if (config_.variant == Variant::devdan && stats_.count() >= 2) {
                const DiscriminativeNs ns = discriminative_ns(target, stats_, state_);
                variance_clamp_events_ += ns.clamped;
                trace(Phase::discriminative, ns.bias_sq, ns.variance);
                if (std::isfinite(ns.bias_sq) && std::isfinite(ns.variance)) {
                    // grows with the reconstruction residual of the clean
                    // input, keeping the tied autoencoder coherent
                    structural_step(disc_bias_, disc_var_, ns.bias_sq, ns.variance, x, x,
                                    Phase::discriminative, t);
                } else {
                    ++divergence_events_;
                }
            }
            discriminative_sgd_step(state_, x, target, config_.lr_discriminative);
            ++step_;
        }
    }

    void begin_timestamp(std::size_t k) { timestamp_ = k; }

    const NetworkState& state() const { return state_; }
    const RunningStats& stats() const { return stats_; }
    const std::vector<StructuralEvent>& events() const { return events_; }
    const std::vector<NsTraceRecord>& trace_records() const { return trace_records_; }
    std::size_t mask_calls() const { return mask_calls_; }
    std::size_t variance_clamp_events() const { return variance_clamp_events_; }
    std::size_t divergence_events() const { return divergence_events_; }
    void enable_trace(bool on) { trace_enabled_ = on; }

private:
    void trace(Phase phase, double bias_sq, double variance) {
        if (!trace_enabled_) return;
        trace_records_.push_back({timestamp_, step_, phase, bias_sq, variance});
    }

    void structural_step(SignificanceTracker& bias_tracker, SignificanceTracker& var_tracker,
                         double bias_sq, double variance, const std::vector<double>& clean,
                         const std::vector<double>& encoder_input, Phase phase,
                         std::size_t sample_index) {
        bias_tracker.update(bias_sq);
        bool grown = false;
        const double pi_coef = growth_coefficient(bias_sq);
        if (check_growth(bias_tracker, pi_coef)) {
            record_event(bias_tracker, phase, EventKind::grow, sample_index, pi_coef);
            bias_tracker.reset_minima();
            const std::vector<double> z = decode(encode(encoder_input, state_), state_);
            std::vector<double> residual(clean.size());
            for (std::size_t j = 0; j < clean.size(); ++j) residual[j] = clean[j] - z[j];
            grow_node(state_, residual, rng_);
            events_.back().hidden_after = state_.hidden();
            grown = true;
        }
        var_tracker.update(variance);
        if (!grown) {
            const double chi_coef = prune_coefficient(variance);
            if (check_prune(var_tracker, chi_coef)) {
                record_event(var_tracker, phase,
                             state_.hidden() > 1 ? EventKind::prune : EventKind::prune_skip,
                             sample_index, chi_coef);
                var_tracker.reset_minima();
                if (state_.hidden() > 1) {
                    const std::vector<double> hs = hidden_significance(stats_, state_);
                    prune_node(state_, hs);
                }
                events_.back().hidden_after = state_.hidden();
            }
        }
    }

    void record_event(const SignificanceTracker& tracker, Phase phase, EventKind kind,
                      std::size_t sample_index, double coef) {
        StructuralEvent ev;
        ev.timestamp = timestamp_;
        ev.step = step_;
        ev.sample = sample_index;
        ev.phase = phase;
        ev.kind = kind;
        ev.hidden_after = state_.hidden();
        ev.mean_t = tracker.mean();
        ev.std_t = tracker.stddev();
        ev.mean_min = tracker.mean_min();
        ev.std_min = tracker.std_min();
        ev.coefficient = coef;
        events_.push_back(ev);
    }

    LearnerConfig config_;
    std::mt19937_64 rng_;
    RunningStats stats_;
    NetworkState state_;
    SignificanceTracker gen_bias_, gen_var_, disc_bias_, disc_var_;
    std::vector<StructuralEvent> events_;
    std::vector<NsTraceRecord> trace_records_;
    std::size_t timestamp_ = 0;
    std::size_t step_ = 0;
    std::size_t mask_calls_ = 0;
    std::size_t variance_clamp_events_ = 0;
    std::size_t divergence_events_ = 0;
    bool trace_enabled_ = false;
};

} // namespace devdan
