#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "devdan/network.hpp"

namespace devdan {

/// Streaming mean / population std of a significance signal together with
/// the recorded minima of both statistics. The minima restart from the first
/// update after a fired trigger, so a trigger has to see the statistics rise
/// above a band re-anchored at the post-fire level before it fires again.
class SignificanceTracker {
public:
    void update(double value) {
        if (!std::isfinite(value))
            throw std::invalid_argument("SignificanceTracker::update: non-finite value");
        ++count_;
        const double delta = value - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (value - mean_);
        if (!seeded_) {
            mean_min_ = mean_;
            std_min_ = stddev();
            seeded_ = true;
        } else {
            mean_min_ = std::min(mean_min_, mean_);
            std_min_ = std::min(std_min_, stddev());
        }
    }

    /// Re-anchors the minima at the current statistics; min tracking resumes
    /// from the next update.
    void reset_minima() {
        mean_min_ = mean_;
        std_min_ = stddev();
        seeded_ = false;
    }

    std::size_t count() const { return count_; }
    double mean() const { return mean_; }
    double stddev() const {
        return count_ > 0 ? std::sqrt(std::max(0.0, m2_ / static_cast<double>(count_))) : 0.0;
    }
    double mean_min() const { return mean_min_; }
    double std_min() const { return std_min_; }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double mean_min_ = 0.0;
    double std_min_ = 0.0;
    bool seeded_ = false;
};

/// Dynamic confidence coefficient for the growth rule; in (0.7, 2.0] with 2
/// at zero bias.
inline double growth_coefficient(double bias_sq) {
    return 1.3 * std::exp(-bias_sq) + 0.7;
}

/// Dynamic confidence coefficient for the prune rule, same shape driven by
/// the variance estimate.
inline double prune_coefficient(double variance) {
    return 1.3 * std::exp(-variance) + 0.7;
}

/// Sigma rule: current mean + std reaches the recorded minima band.
inline bool sigma_threshold_met(double mean_t, double std_t, double mean_min, double std_min,
                                double coef) {
    return mean_t + std_t >= mean_min + coef * std_min;
}

/// Growth trigger. On true the caller must reset the tracker minima.
inline bool check_growth(const SignificanceTracker& t, double pi_coef) {
    return sigma_threshold_met(t.mean(), t.stddev(), t.mean_min(), t.std_min(), pi_coef);
}

/// Prune trigger; the factor 2 makes pruning strictly harder than growth at
/// equal coefficients, damping prune-right-after-grow flapping. On true the
/// caller must reset the tracker minima.
inline bool check_prune(const SignificanceTracker& t, double chi_coef) {
    return sigma_threshold_met(t.mean(), t.stddev(), t.mean_min(), t.std_min(), 2.0 * chi_coef);
}

/// Appends one hidden unit: the new encoder column is the negated
/// reconstruction residual (clamped into [-1,1]), the new hidden bias is
/// uniform on [-1,1], and the new softmax row is zero so the classification
/// output is initially unchanged. Surviving parameters are untouched.
inline void grow_node(NetworkState& s, const std::vector<double>& residual,
                      std::mt19937_64& rng) {
    if (residual.size() != s.inputs())
        throw std::invalid_argument("grow_node: residual dimension mismatch");
    std::vector<double> column(residual.size());
    for (std::size_t j = 0; j < residual.size(); ++j)
        column[j] = std::clamp(-residual[j], -1.0, 1.0);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    s.w.append_col(column);
    s.b.push_back(unit(rng));
    s.phi.append_row(std::vector<double>(s.classes(), 0.0));
}

/// Removes the hidden unit with the smallest significance (ties break toward
/// the lowest index). Refuses to remove the last unit and reports whether a
/// removal happened.
inline bool prune_node(NetworkState& s, const std::vector<double>& hs) {
    if (hs.size() != s.hidden())
        throw std::invalid_argument("prune_node: significance dimension mismatch");
    if (s.hidden() <= 1) return false;
    const std::size_t victim = static_cast<std::size_t>(
        std::min_element(hs.begin(), hs.end()) - hs.begin());
    s.w.remove_col(victim);
    s.b.erase(s.b.begin() + static_cast<std::ptrdiff_t>(victim));
    s.phi.remove_row(victim);
    return true;
}

enum class Phase { generative, discriminative };
enum class EventKind { grow, prune, prune_skip };

inline const char* to_string(Phase p) {
    return p == Phase::generative ? "generative" : "discriminative";
}

inline const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::grow: return "grow";
    case EventKind::prune: return "prune";
    default: return "prune_skip";
    }
}

/// One structural mutation (or refused prune), with the trigger statistics
/// recorded at fire time.
struct StructuralEvent {
    std::size_t timestamp = 0;   // batch ordinal k
    std::size_t step = 0;        // cumulative per-sample training steps
    std::size_t sample = 0;      // sample index within the batch
    Phase phase = Phase::generative;
    EventKind kind = EventKind::grow;
    std::size_t hidden_after = 0;
    double mean_t = 0.0;
    double std_t = 0.0;
    double mean_min = 0.0;
    double std_min = 0.0;
    double coefficient = 0.0;
};

} // namespace devdan
