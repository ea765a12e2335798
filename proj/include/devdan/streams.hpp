#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace devdan {

/// One timestamped chunk of a data stream: a T x n block of feature rows in
/// [0,1] plus the integer class label of each row. Labels travel with the
/// batch but are only consulted by the test pass and the supervised phase.
struct DataBatch {
    std::size_t index = 0;                       // timestamp ordinal k (1-based)
    std::vector<std::vector<double>> features;   // T rows, n columns
    std::vector<int> labels;                     // T entries in [0, m)

    std::size_t size() const { return features.size(); }
};

/// A training observation paired with its partially destroyed copy.
/// corrupted[i] == 0 wherever mask[i] is set and equals clean[i] elsewhere.
struct CorruptedSample {
    std::vector<double> clean;
    std::vector<double> corrupted;
    std::vector<bool> mask;
};

/// Per-feature streaming mean and population standard deviation (Welford).
class RunningStats {
public:
    RunningStats() = default;
    explicit RunningStats(std::size_t dim) : mean_(dim, 0.0), m2_(dim, 0.0) {}

    std::size_t dim() const { return mean_.size(); }
    std::size_t count() const { return count_; }

    void update(const std::vector<double>& x) {
        if (x.size() != mean_.size())
            throw std::invalid_argument("RunningStats::update: dimension mismatch");
        ++count_;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double delta = x[i] - mean_[i];
            mean_[i] += delta / static_cast<double>(count_);
            m2_[i] += delta * (x[i] - mean_[i]);
        }
    }

    const std::vector<double>& mean() const {
        if (count_ == 0) throw std::logic_error("RunningStats::mean: no samples");
        return mean_;
    }

    /// Population standard deviation (divide by count).
    std::vector<double> stddev() const {
        if (count_ == 0) throw std::logic_error("RunningStats::stddev: no samples");
        std::vector<double> sd(m2_.size());
        for (std::size_t i = 0; i < m2_.size(); ++i)
            sd[i] = std::sqrt(std::max(0.0, m2_[i] / static_cast<double>(count_)));
        return sd;
    }

private:
    std::size_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
};

/// Affine rescale of x into [0,1] given per-feature (min,max) ranges, with
/// clamping. A degenerate range (min == max) maps to 0.5.
inline std::vector<double> normalize(const std::vector<double>& x,
                                     const std::vector<std::pair<double, double>>& ranges) {
    if (x.size() != ranges.size())
        throw std::invalid_argument("normalize: dimension mismatch");
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const auto [lo, hi] = ranges[i];
        if (lo == hi) {
            out[i] = 0.5;
        } else {
            out[i] = std::clamp((x[i] - lo) / (hi - lo), 0.0, 1.0);
        }
    }
    return out;
}

/// Masking noise: zeroes exactly round(corruption_prob * n) distinct feature
/// positions, drawn uniformly without replacement. A fresh draw per call.
inline CorruptedSample mask_noise(const std::vector<double>& x, double corruption_prob,
                                  std::mt19937_64& rng) {
    const std::size_t n = x.size();
    const auto n_masked =
        static_cast<std::size_t>(std::lround(corruption_prob * static_cast<double>(n)));
    CorruptedSample sample;
    sample.clean = x;
    sample.corrupted = x;
    sample.mask.assign(n, false);
    if (n_masked == 0) return sample;

    // partial Fisher-Yates: the first n_masked slots end up a uniform subset
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n_masked; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(idx[i], idx[pick(rng)]);
        sample.mask[idx[i]] = true;
        sample.corrupted[idx[i]] = 0.0;
    }
    return sample;
}

/// 0-1 target encoding: m-vector with a single 1 at the label position.
inline std::vector<double> one_hot(int label, std::size_t m) {
    if (label < 0 || static_cast<std::size_t>(label) >= m)
        throw std::out_of_range("one_hot: label outside [0, m)");
    std::vector<double> t(m, 0.0);
    t[static_cast<std::size_t>(label)] = 1.0;
    return t;
}

/// Single-consumer batch stream. next() yields batches in order until the
/// stream is exhausted; the final batch may be short.
class StreamSource {
public:
    virtual ~StreamSource() = default;
    virtual std::optional<DataBatch> next() = 0;
    virtual std::size_t feature_count() const = 0;
    virtual std::size_t class_count() const = 0;
};

/// SEA concept: class 1 iff the first two raw features sum to at most the
/// active threshold. The third feature is irrelevant.
inline int sea_label(double f1, double f2, double threshold) {
    return f1 + f2 <= threshold ? 1 : 0;
}

/// SEA synthetic stream: three features uniform on [0,10] (emitted rescaled
/// to [0,1]), threshold switching at equal-length block boundaries, optional
/// label-flip noise.
class SeaStream final : public StreamSource {
public:
    SeaStream(std::size_t n_samples, std::vector<double> thresholds, double noise_frac,
              std::uint64_t seed, std::size_t batch_size)
        : n_samples_(n_samples),
          thresholds_(std::move(thresholds)),
          noise_frac_(noise_frac),
          batch_size_(batch_size),
          rng_(seed) {
        if (n_samples_ == 0) throw std::invalid_argument("SeaStream: n_samples must be positive");
        if (thresholds_.empty()) throw std::invalid_argument("SeaStream: threshold list is empty");
        if (batch_size_ == 0) throw std::invalid_argument("SeaStream: batch size must be positive");
        block_len_ = std::max<std::size_t>(1, n_samples_ / thresholds_.size());
    }

    std::optional<DataBatch> next() override {
        if (emitted_ >= n_samples_) return std::nullopt;
        DataBatch batch;
        batch.index = ++batch_index_;
        const std::size_t take = std::min(batch_size_, n_samples_ - emitted_);
        batch.features.reserve(take);
        batch.labels.reserve(take);
        std::uniform_real_distribution<double> feat(0.0, 10.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t t = 0; t < take; ++t) {
            const double f1 = feat(rng_);
            const double f2 = feat(rng_);
            const double f3 = feat(rng_);
            const std::size_t block = std::min(emitted_ / block_len_, thresholds_.size() - 1);
            int label = sea_label(f1, f2, thresholds_[block]);
            if (noise_frac_ > 0.0 && unit(rng_) < noise_frac_) label = 1 - label;
            batch.features.push_back(normalize({f1, f2, f3}, ranges_));
            batch.labels.push_back(label);
            ++emitted_;
        }
        return batch;
    }

    std::size_t feature_count() const override { return 3; }
    std::size_t class_count() const override { return 2; }

private:
    std::size_t n_samples_;
    std::vector<double> thresholds_;
    double noise_frac_;
    std::size_t batch_size_;
    std::size_t block_len_;
    std::size_t emitted_ = 0;
    std::size_t batch_index_ = 0;
    std::mt19937_64 rng_;
    std::vector<std::pair<double, double>> ranges_{3, {0.0, 10.0}};
};

/// Hyperplane concept: class 1 iff w.x exceeds half the weight sum.
inline int hyperplane_label(const std::vector<double>& x, const std::vector<double>& w) {
    double dot = 0.0, total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += w[i] * x[i];
        total += w[i];
    }
    return dot > 0.5 * total ? 1 : 0;
}

/// Rotating-hyperplane stream: features uniform on [0,1], weights start
/// uniform on [0,1] and random-walk by drift_magnitude per sample, with a
/// 10% chance per step of reversing a weight's drift direction. Weights
/// reflect off the [0,1] bounds. The boundary w.x = sum(w)/2 keeps the
/// classes balanced as the weights move.
class HyperplaneStream final : public StreamSource {
public:
    HyperplaneStream(std::size_t n_samples, std::size_t n_features, double drift_magnitude,
                     std::uint64_t seed, std::size_t batch_size)
        : n_samples_(n_samples),
          n_features_(n_features),
          drift_(drift_magnitude),
          batch_size_(batch_size),
          rng_(seed) {
        if (n_samples_ == 0)
            throw std::invalid_argument("HyperplaneStream: n_samples must be positive");
        if (n_features_ < 2)
            throw std::invalid_argument("HyperplaneStream: need at least 2 features");
        if (batch_size_ == 0)
            throw std::invalid_argument("HyperplaneStream: batch size must be positive");
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        weights_.resize(n_features_);
        for (auto& w : weights_) w = unit(rng_);
        directions_.assign(n_features_, 1.0);
    }

    std::optional<DataBatch> next() override {
        if (emitted_ >= n_samples_) return std::nullopt;
        DataBatch batch;
        batch.index = ++batch_index_;
        const std::size_t take = std::min(batch_size_, n_samples_ - emitted_);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t t = 0; t < take; ++t) {
            std::vector<double> x(n_features_);
            for (auto& v : x) v = unit(rng_);
            batch.labels.push_back(hyperplane_label(x, weights_));
            batch.features.push_back(std::move(x));
            drift_weights(unit);
            ++emitted_;
        }
        return batch;
    }

    std::size_t feature_count() const override { return n_features_; }
    std::size_t class_count() const override { return 2; }

    const std::vector<double>& weights() const { return weights_; }

private:
    void drift_weights(std::uniform_real_distribution<double>& unit) {
        for (std::size_t i = 0; i < n_features_; ++i) {
            if (unit(rng_) < 0.1) directions_[i] = -directions_[i];
            double w = weights_[i] + directions_[i] * drift_;
            if (w > 1.0) {
                w = 1.0;
                directions_[i] = -directions_[i];
            } else if (w < 0.0) {
                w = 0.0;
                directions_[i] = -directions_[i];
            }
            weights_[i] = w;
        }
    }

    std::size_t n_samples_;
    std::size_t n_features_;
    double drift_;
    std::size_t batch_size_;
    std::size_t emitted_ = 0;
    std::size_t batch_index_ = 0;
    std::mt19937_64 rng_;
    std::vector<double> weights_;
    std::vector<double> directions_;
};

/// CSV-backed stream. Rows are consumed in file order and chunked into
/// batches of the configured size. Features are rescaled into [0,1] with
/// per-feature min/max ranges accumulated over the rows seen so far (the
/// incoming batch included), so no second pass over the file is needed.
class CsvStream final : public StreamSource {
public:
    CsvStream(const std::string& path, std::size_t label_column, std::size_t class_count,
              std::size_t batch_size, bool has_header)
        : label_column_(label_column), class_count_(class_count), batch_size_(batch_size),
          file_(path) {
        if (class_count_ < 2) throw std::invalid_argument("CsvStream: need at least 2 classes");
        if (batch_size_ == 0) throw std::invalid_argument("CsvStream: batch size must be positive");
        if (!file_) throw std::runtime_error("CsvStream: cannot open '" + path + "'");
        if (has_header) {
            std::string header;
            if (std::getline(file_, header)) ++line_no_;
        }
    }

    std::optional<DataBatch> next() override {
        std::vector<std::vector<double>> raw;
        std::vector<int> labels;
        std::string line;
        while (raw.size() < batch_size_ && std::getline(file_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto [features, label] = parse_row(line);
            raw.push_back(std::move(features));
            labels.push_back(label);
        }
        if (raw.empty()) return std::nullopt;

        for (const auto& row : raw) {
            if (ranges_.empty()) {
                ranges_.reserve(row.size());
                for (double v : row) ranges_.emplace_back(v, v);
            } else {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    ranges_[i].first = std::min(ranges_[i].first, row[i]);
                    ranges_[i].second = std::max(ranges_[i].second, row[i]);
                }
            }
        }

        DataBatch batch;
        batch.index = ++batch_index_;
        batch.labels = std::move(labels);
        batch.features.reserve(raw.size());
        for (const auto& row : raw) batch.features.push_back(normalize(row, ranges_));
        return batch;
    }

    std::size_t feature_count() const override {
        if (n_features_ == 0)
            throw std::logic_error("CsvStream: feature count unknown before the first row");
        return n_features_;
    }
    std::size_t class_count() const override { return class_count_; }

    /// Peeks at the first data row to fix the schema without consuming it.
    void probe() {
        if (n_features_ > 0) return;
        const auto pos = file_.tellg();
        const std::size_t saved_line = line_no_;
        std::string line;
        while (std::getline(file_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            parse_row(line);
            break;
        }
        file_.clear();
        file_.seekg(pos);
        line_no_ = saved_line;
        if (n_features_ == 0) throw std::runtime_error("CsvStream: file contains no data rows");
    }

private:
    std::pair<std::vector<double>, int> parse_row(const std::string& line) {
        std::vector<std::string> fields;
        std::string field;
        std::stringstream ss(line);
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (!line.empty() && line.back() == ',') fields.push_back("");

        if (label_column_ >= fields.size())
            throw std::runtime_error("row " + std::to_string(line_no_) +
                                     ": label column " + std::to_string(label_column_) +
                                     " out of range for " + std::to_string(fields.size()) +
                                     " fields");
        if (n_features_ == 0) {
            n_features_ = fields.size() - 1;
        } else if (fields.size() != n_features_ + 1) {
            throw std::runtime_error("row " + std::to_string(line_no_) + ": expected " +
                                     std::to_string(n_features_ + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        }

        std::vector<double> features;
        features.reserve(n_features_);
        int label = 0;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == label_column_) {
                label = parse_label(fields[i]);
            } else {
                features.push_back(parse_value(fields[i]));
            }
        }
        return {std::move(features), label};
    }

    double parse_value(const std::string& field) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(field, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("row " + std::to_string(line_no_) +
                                     ": cannot parse '" + field + "' as a number");
        }
        if (used != field.size())
            throw std::runtime_error("row " + std::to_string(line_no_) +
                                     ": cannot parse '" + field + "' as a number");
        return v;
    }

    int parse_label(const std::string& field) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(field, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("row " + std::to_string(line_no_) +
                                     ": cannot parse label '" + field + "'");
        }
        if (used != field.size())
            throw std::runtime_error("row " + std::to_string(line_no_) +
                                     ": cannot parse label '" + field + "'");
        if (v < 0 || static_cast<std::size_t>(v) >= class_count_)
            throw std::runtime_error("row " + std::to_string(line_no_) + ": label " +
                                     std::to_string(v) + " outside [0, " +
                                     std::to_string(class_count_) + ")");
        return static_cast<int>(v);
    }

    std::size_t label_column_;
    std::size_t class_count_;
    std::size_t batch_size_;
    std::ifstream file_;
    std::size_t line_no_ = 0;
    std::size_t n_features_ = 0;
    std::size_t batch_index_ = 0;
    std::vector<std::pair<double, double>> ranges_;
};

} // namespace devdan
