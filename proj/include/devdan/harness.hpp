#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "devdan/learner.hpp"
#include "devdan/streams.hpp"

namespace devdan {

enum class DatasetKind { sea, hyperplane, csv };

struct DatasetSpec {
    DatasetKind kind = DatasetKind::sea;
    std::size_t samples = 100000;
    // sea
    std::vector<double> sea_thresholds{8.0, 9.0, 7.0, 9.5};
    double noise_frac = 0.0;
    // hyperplane
    std::size_t features = 4;
    double drift_magnitude = 0.001;
    // csv
    std::string csv_path;
    std::size_t label_column = 0;
    std::size_t classes = 2;
    bool has_header = false;

    std::string name() const {
        switch (kind) {
        case DatasetKind::sea: return "sea";
        case DatasetKind::hyperplane: return "hyperplane";
        default: return "csv:" + csv_path;
        }
    }
};

struct ExperimentConfig {
    DatasetSpec dataset;
    std::size_t batch_size = 500;
    double corruption_prob = 0.1;
    double lr_generative = 0.05;
    double lr_discriminative = 0.05;
    Variant variant = Variant::devdan;
    std::size_t fixed_hidden = 10;
    std::uint64_t seed = 1;
    bool trace = false;
};

/// Stream and learner draw from decoupled seeds so the same data stream can
/// be replayed against differently seeded models.
inline std::unique_ptr<StreamSource> make_stream(const ExperimentConfig& cfg) {
    switch (cfg.dataset.kind) {
    case DatasetKind::sea:
        return std::make_unique<SeaStream>(cfg.dataset.samples, cfg.dataset.sea_thresholds,
                                           cfg.dataset.noise_frac, cfg.seed, cfg.batch_size);
    case DatasetKind::hyperplane:
        return std::make_unique<HyperplaneStream>(cfg.dataset.samples, cfg.dataset.features,
                                                  cfg.dataset.drift_magnitude, cfg.seed,
                                                  cfg.batch_size);
    default: {
        auto stream = std::make_unique<CsvStream>(cfg.dataset.csv_path, cfg.dataset.label_column,
                                                  cfg.dataset.classes, cfg.batch_size,
                                                  cfg.dataset.has_header);
        stream->probe();
        return stream;
    }
    }
}

struct TimelineRecord {
    std::size_t k = 0;            // timestamp ordinal
    double cr = 0.0;              // classification rate of the test pass
    std::size_t hidden = 0;       // hidden units after training this batch
    std::size_t params = 0;       // parameter count after training this batch
    double elapsed_seconds = 0.0; // cumulative wall-clock time
};

struct MetricsTimeline {
    std::vector<TimelineRecord> records;
};

struct RunResult {
    MetricsTimeline timeline;
    std::vector<StructuralEvent> events;
    std::vector<NsTraceRecord> trace_records;
    NetworkState final_state;
    std::size_t grow_events = 0;
    std::size_t prune_events = 0;
    std::size_t prune_skips = 0;
    std::size_t variance_clamp_events = 0;
    std::size_t divergence_events = 0;
    std::size_t samples = 0;
};

/// Prequential test-then-train loop: every batch first scores the current
/// model, then runs the unsupervised pass, then the supervised pass with the
/// revealed labels, and finally logs the structure metrics.
inline RunResult prequential_run(const ExperimentConfig& cfg) {
    auto stream = make_stream(cfg);
    LearnerConfig lc;
    lc.variant = cfg.variant;
    lc.corruption_prob = cfg.corruption_prob;
    lc.lr_generative = cfg.lr_generative;
    lc.lr_discriminative = cfg.lr_discriminative;
    lc.fixed_hidden = cfg.fixed_hidden;
    lc.seed = cfg.seed + 1;
    Learner learner(stream->feature_count(), stream->class_count(), lc);
    learner.enable_trace(cfg.trace);

    RunResult result;
    double elapsed = 0.0;
    std::size_t k = 0;
    while (auto batch = stream->next()) {
        ++k;
        learner.begin_timestamp(k);
        const auto start = std::chrono::steady_clock::now();
        const double cr = learner.test_batch(*batch);
        learner.train_generative(*batch);
        learner.train_discriminative(*batch);
        elapsed += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.timeline.records.push_back({k, cr, learner.state().hidden(),
                                           learner.state().parameter_count(), elapsed});
        result.samples += batch->size();
    }
    if (k == 0) throw std::runtime_error("prequential_run: stream produced no batches");

    result.events = learner.events();
    result.trace_records = learner.trace_records();
    for (const auto& ev : result.events) {
        switch (ev.kind) {
        case EventKind::grow: ++result.grow_events; break;
        case EventKind::prune: ++result.prune_events; break;
        case EventKind::prune_skip: ++result.prune_skips; break;
        }
    }
    result.variance_clamp_events = learner.variance_clamp_events();
    result.divergence_events = learner.divergence_events();
    result.final_state = learner.state();
    return result;
}

struct Summary {
    double cr_mean = 0.0;
    double cr_std = 0.0;
    double hn_mean = 0.0;
    double hn_std = 0.0;
    std::size_t nop_final = 0;
    double et_total_seconds = 0.0;
    std::size_t batches = 0;
};

/// Mean and population std of the classification rate and hidden-node count
/// across all timestamps, plus the final parameter count and total time.
inline Summary aggregate(const MetricsTimeline& timeline) {
    if (timeline.records.empty()) throw std::invalid_argument("aggregate: empty timeline");
    Summary s;
    s.batches = timeline.records.size();
    const double count = static_cast<double>(s.batches);
    double cr_sum = 0.0, hn_sum = 0.0;
    for (const auto& rec : timeline.records) {
        cr_sum += rec.cr;
        hn_sum += static_cast<double>(rec.hidden);
    }
    s.cr_mean = cr_sum / count;
    s.hn_mean = hn_sum / count;
    double cr_sq = 0.0, hn_sq = 0.0;
    for (const auto& rec : timeline.records) {
        cr_sq += (rec.cr - s.cr_mean) * (rec.cr - s.cr_mean);
        const double hd = static_cast<double>(rec.hidden) - s.hn_mean;
        hn_sq += hd * hd;
    }
    s.cr_std = std::sqrt(cr_sq / count);
    s.hn_std = std::sqrt(hn_sq / count);
    s.nop_final = timeline.records.back().params;
    s.et_total_seconds = timeline.records.back().elapsed_seconds;
    return s;
}

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string compact9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace detail

/// Deterministic per-timestamp metrics; wall-clock timings go to the
/// companion timing file so this one is byte-stable across identical runs.
inline void write_timeline_csv(const MetricsTimeline& timeline, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_timeline_csv: cannot write '" + path + "'");
    out << "k,cr,hn,nop\n";
    for (const auto& rec : timeline.records)
        out << rec.k << ',' << detail::fixed6(rec.cr) << ',' << rec.hidden << ',' << rec.params
            << '\n';
}

inline void write_timing_csv(const MetricsTimeline& timeline, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_timing_csv: cannot write '" + path + "'");
    out << "k,elapsed_seconds\n";
    for (const auto& rec : timeline.records)
        out << rec.k << ',' << detail::fixed6(rec.elapsed_seconds) << '\n';
}

inline void write_events_csv(const std::vector<StructuralEvent>& events, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_events_csv: cannot write '" + path + "'");
    out << "k,step,sample,phase,event,r_after,mean_t,std_t,mean_min,std_min,coefficient\n";
    for (const auto& ev : events)
        out << ev.timestamp << ',' << ev.step << ',' << ev.sample << ',' << to_string(ev.phase)
            << ',' << to_string(ev.kind) << ',' << ev.hidden_after << ','
            << detail::compact9(ev.mean_t) << ',' << detail::compact9(ev.std_t) << ','
            << detail::compact9(ev.mean_min) << ',' << detail::compact9(ev.std_min) << ','
            << detail::compact9(ev.coefficient) << '\n';
}

inline void write_trace_csv(const std::vector<NsTraceRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trace_csv: cannot write '" + path + "'");
    out << "k,step,phase,bias_sq,variance\n";
    for (const auto& rec : records)
        out << rec.timestamp << ',' << rec.step << ',' << to_string(rec.phase) << ','
            << detail::compact9(rec.bias_sq) << ',' << detail::compact9(rec.variance) << '\n';
}

inline nlohmann::ordered_json summary_to_json(const ExperimentConfig& cfg, const Summary& summary,
                                              const RunResult& result) {
    nlohmann::ordered_json doc;
    doc["dataset"] = cfg.dataset.name();
    doc["variant"] = to_string(cfg.variant);
    doc["seed"] = cfg.seed;
    doc["batch_size"] = cfg.batch_size;
    doc["batches"] = summary.batches;
    doc["samples"] = result.samples;
    doc["cr_mean"] = summary.cr_mean;
    doc["cr_std"] = summary.cr_std;
    doc["hn_mean"] = summary.hn_mean;
    doc["hn_std"] = summary.hn_std;
    doc["nop_final"] = summary.nop_final;
    doc["et_total_seconds"] = summary.et_total_seconds;
    doc["grow_events"] = result.grow_events;
    doc["prune_events"] = result.prune_events;
    doc["prune_skips"] = result.prune_skips;
    doc["variance_clamp_events"] = result.variance_clamp_events;
    doc["divergence_events"] = result.divergence_events;
    return doc;
}

/// Writes summary.json, timeline.csv, timing.csv, events.csv (and trace.csv
/// when tracing was on) under out_dir, creating the directory if needed.
inline void report(const ExperimentConfig& cfg, const Summary& summary, const RunResult& result,
                   const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw std::runtime_error("report: cannot create '" + out_dir + "': " + ec.message());
    const fs::path base(out_dir);
    std::ofstream summary_out(base / "summary.json");
    if (!summary_out)
        throw std::runtime_error("report: cannot write summary.json under '" + out_dir + "'");
    summary_out << summary_to_json(cfg, summary, result).dump(2) << '\n';
    write_timeline_csv(result.timeline, (base / "timeline.csv").string());
    write_timing_csv(result.timeline, (base / "timing.csv").string());
    write_events_csv(result.events, (base / "events.csv").string());
    if (cfg.trace) write_trace_csv(result.trace_records, (base / "trace.csv").string());
}

} // namespace devdan
