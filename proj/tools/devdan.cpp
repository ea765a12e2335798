// Command-line front end: runs one prequential experiment over a synthetic
// generator or a CSV stream and writes the metric/event reports.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "devdan/checkpoint.hpp"
#include "devdan/harness.hpp"

int main(int argc, char** argv) {
    CLI::App app{"devdan: evolving denoising autoencoder over drifting data streams"};
    app.set_config("--config", "", "configuration file (INI/TOML; CLI flags override it)");

    std::string dataset;
    std::string csv_path;
    std::size_t label_col = 0;
    std::size_t classes = 2;
    bool header = false;
    std::size_t samples = 100000;
    std::vector<double> sea_thresholds{8.0, 9.0, 7.0, 9.5};
    double noise_frac = 0.0;
    std::size_t features = 4;
    double drift = 0.001;
    std::size_t batch_size = 500;
    double corruption = 0.1;
    double lr_gen = 0.05;
    double lr_disc = 0.05;
    std::string variant = "devdan";
    std::size_t hidden = 10;
    std::uint64_t seed = 1;
    std::string out_dir;
    std::string save_model;
    bool trace = false;

    auto* dataset_opt = app.add_option("--dataset", dataset, "synthetic stream: sea | hyperplane")
                            ->check(CLI::IsMember({"sea", "hyperplane"}));
    auto* csv_opt = app.add_option("--csv", csv_path, "CSV stream path")->excludes(dataset_opt);
    dataset_opt->excludes(csv_opt);
    app.add_option("--label-col", label_col, "CSV label column index (0-based)");
    app.add_option("--classes", classes, "number of classes for CSV streams");
    app.add_flag("--header", header, "skip the first CSV row");
    app.add_option("--samples", samples, "samples to draw from a synthetic stream");
    app.add_option("--sea-thresholds", sea_thresholds,
                   "SEA block thresholds (one drift block per value)")
        ->delimiter(',');
    app.add_option("--noise-frac", noise_frac, "SEA label-flip probability")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--features", features, "hyperplane feature count");
    app.add_option("--drift", drift, "hyperplane weight drift per sample");
    app.add_option("--batch-size", batch_size, "samples per timestamp")
        ->check(CLI::PositiveNumber);
    app.add_option("--corruption", corruption, "masking-noise probability")
        ->check(CLI::Range(0.0, 0.999));
    app.add_option("--lr-gen", lr_gen, "unsupervised learning rate")->check(CLI::PositiveNumber);
    app.add_option("--lr-disc", lr_disc, "supervised learning rate")->check(CLI::PositiveNumber);
    app.add_option("--variant", variant, "devdan | fixed-ae | fixed-dae")
        ->check(CLI::IsMember({"devdan", "fixed-ae", "fixed-dae"}));
    app.add_option("--hidden", hidden, "hidden units for the fixed variants")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out-dir", out_dir, "directory for summary/timeline/event reports");
    app.add_option("--save-model", save_model, "write the final network state to this path");
    app.add_flag("--trace", trace, "log per-sample significance estimates");

    CLI11_PARSE(app, argc, argv);

    try {
        devdan::ExperimentConfig cfg;
        if (!csv_path.empty()) {
            cfg.dataset.kind = devdan::DatasetKind::csv;
            cfg.dataset.csv_path = csv_path;
            cfg.dataset.label_column = label_col;
            cfg.dataset.classes = classes;
            cfg.dataset.has_header = header;
        } else if (dataset == "hyperplane") {
            cfg.dataset.kind = devdan::DatasetKind::hyperplane;
            cfg.dataset.samples = samples;
            cfg.dataset.features = features;
            cfg.dataset.drift_magnitude = drift;
        } else if (dataset == "sea") {
            cfg.dataset.kind = devdan::DatasetKind::sea;
            cfg.dataset.samples = samples;
            cfg.dataset.sea_thresholds = sea_thresholds;
            cfg.dataset.noise_frac = noise_frac;
        } else {
            std::cerr << "error: pick a stream with --dataset or --csv\n";
            return 1;
        }
        cfg.batch_size = batch_size;
        cfg.corruption_prob = corruption;
        cfg.lr_generative = lr_gen;
        cfg.lr_discriminative = lr_disc;
        cfg.variant = devdan::variant_from_string(variant);
        cfg.fixed_hidden = hidden;
        cfg.seed = seed;
        cfg.trace = trace;

        const devdan::RunResult result = devdan::prequential_run(cfg);
        const devdan::Summary summary = devdan::aggregate(result.timeline);
        if (!out_dir.empty()) devdan::report(cfg, summary, result, out_dir);
        if (!save_model.empty()) devdan::save_state(result.final_state, save_model);
        std::cout << devdan::summary_to_json(cfg, summary, result).dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
