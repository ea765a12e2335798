#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "devdan/harness.hpp"

using namespace devdan;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

ExperimentConfig small_sea_config() {
    ExperimentConfig cfg;
    cfg.dataset.kind = DatasetKind::sea;
    cfg.dataset.samples = 2000;
    cfg.dataset.sea_thresholds = {8.0, 9.0};
    cfg.dataset.noise_frac = 0.0;
    cfg.batch_size = 250;
    cfg.seed = 13;
    return cfg;
}

} // namespace

TEST_CASE("aggregate on tiny timelines") {
    MetricsTimeline two;
    two.records = {{1, 0.9, 3, 10, 0.1}, {2, 0.9, 3, 10, 0.2}};
    auto s = aggregate(two);
    CHECK(s.cr_mean == Catch::Approx(0.9));
    CHECK(s.cr_std == Catch::Approx(0.0));

    MetricsTimeline split;
    split.records = {{1, 1.0, 3, 10, 0.1}, {2, 0.0, 3, 10, 0.2}};
    s = aggregate(split);
    CHECK(s.cr_mean == Catch::Approx(0.5));
    CHECK(s.cr_std == Catch::Approx(0.5));

    CHECK_THROWS_AS(aggregate(MetricsTimeline{}), std::invalid_argument);
}

TEST_CASE("aggregate matches an offline recomputation") {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> nodes(1, 30);
    MetricsTimeline timeline;
    for (std::size_t k = 1; k <= 200; ++k)
        timeline.records.push_back({k, unit(rng), nodes(rng), 0, 0.0});
    const auto s = aggregate(timeline);

    double cr_mean = 0.0, hn_mean = 0.0;
    for (const auto& rec : timeline.records) {
        cr_mean += rec.cr;
        hn_mean += static_cast<double>(rec.hidden);
    }
    cr_mean /= 200.0;
    hn_mean /= 200.0;
    double cr_var = 0.0, hn_var = 0.0;
    for (const auto& rec : timeline.records) {
        cr_var += (rec.cr - cr_mean) * (rec.cr - cr_mean);
        hn_var += (static_cast<double>(rec.hidden) - hn_mean) *
                  (static_cast<double>(rec.hidden) - hn_mean);
    }
    CHECK(s.cr_mean == Catch::Approx(cr_mean).epsilon(1e-12));
    CHECK(s.hn_mean == Catch::Approx(hn_mean).epsilon(1e-12));
    CHECK(s.cr_std == Catch::Approx(std::sqrt(cr_var / 200.0)).epsilon(1e-12));
    CHECK(s.hn_std == Catch::Approx(std::sqrt(hn_var / 200.0)).epsilon(1e-12));
}

TEST_CASE("a one-batch run scores an untrained model") {
    auto cfg = small_sea_config();
    cfg.dataset.samples = 250;
    const auto result = prequential_run(cfg);
    REQUIRE(result.timeline.records.size() == 1);

    // replay the same stream against a freshly constructed learner
    auto stream = make_stream(cfg);
    LearnerConfig lc;
    lc.seed = cfg.seed + 1;
    lc.corruption_prob = cfg.corruption_prob;
    Learner fresh(stream->feature_count(), stream->class_count(), lc);
    const auto batch = stream->next();
    REQUIRE(batch.has_value());
    CHECK(result.timeline.records[0].cr == fresh.test_batch(*batch));
}

TEST_CASE("the driver tests each batch before training on it") {
    auto cfg = small_sea_config();
    cfg.dataset.samples = 500;
    cfg.batch_size = 250;
    const auto result = prequential_run(cfg);
    REQUIRE(result.timeline.records.size() == 2);

    auto stream = make_stream(cfg);
    LearnerConfig lc;
    lc.variant = cfg.variant;
    lc.corruption_prob = cfg.corruption_prob;
    lc.lr_generative = cfg.lr_generative;
    lc.lr_discriminative = cfg.lr_discriminative;
    lc.seed = cfg.seed + 1;
    Learner learner(stream->feature_count(), stream->class_count(), lc);
    std::size_t k = 0;
    while (auto batch = stream->next()) {
        learner.begin_timestamp(++k);
        const double cr = learner.test_batch(*batch);
        CHECK(cr == result.timeline.records[k - 1].cr);
        learner.train_generative(*batch);
        learner.train_discriminative(*batch);
    }
}

TEST_CASE("fixed variants keep their hidden count") {
    auto cfg = small_sea_config();
    cfg.variant = Variant::fixed_dae;
    cfg.fixed_hidden = 10;
    const auto result = prequential_run(cfg);
    for (const auto& rec : result.timeline.records) CHECK(rec.hidden == 10);
    CHECK(result.grow_events == 0);
    CHECK(result.prune_events == 0);

    cfg.variant = Variant::fixed_ae;
    const auto ae = prequential_run(cfg);
    for (const auto& rec : ae.timeline.records) CHECK(rec.hidden == 10);
}

TEST_CASE("parameter count identity holds at every timestamp") {
    const auto result = prequential_run(small_sea_config());
    const std::size_t n = 3, m = 2;
    for (const auto& rec : result.timeline.records) {
        const std::size_t r = rec.hidden;
        CHECK(rec.params == n * r + r + n + r * m + m);
    }
}

TEST_CASE("identical seeds give identical timelines") {
    const auto a = prequential_run(small_sea_config());
    const auto b = prequential_run(small_sea_config());
    REQUIRE(a.timeline.records.size() == b.timeline.records.size());
    for (std::size_t i = 0; i < a.timeline.records.size(); ++i) {
        CHECK(a.timeline.records[i].cr == b.timeline.records[i].cr);
        CHECK(a.timeline.records[i].hidden == b.timeline.records[i].hidden);
        CHECK(a.timeline.records[i].params == b.timeline.records[i].params);
    }
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].step == b.events[i].step);
        CHECK(a.events[i].kind == b.events[i].kind);
        CHECK(a.events[i].hidden_after == b.events[i].hidden_after);
    }
}

TEST_CASE("report writes the documented files deterministically") {
    namespace fs = std::filesystem;
    const auto dir_a = fs::temp_directory_path() / "devdan_report_a";
    const auto dir_b = fs::temp_directory_path() / "devdan_report_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    auto cfg = small_sea_config();
    cfg.dataset.samples = 750;
    const auto run_a = prequential_run(cfg);
    report(cfg, aggregate(run_a.timeline), run_a, dir_a.string());
    const auto run_b = prequential_run(cfg);
    report(cfg, aggregate(run_b.timeline), run_b, dir_b.string());

    for (const char* name : {"timeline.csv", "events.csv"}) {
        CAPTURE(name);
        const auto body_a = slurp(dir_a / name);
        CHECK(body_a == slurp(dir_b / name));
        CHECK(!body_a.empty());
    }

    // 3 batches -> header + 3 rows
    std::istringstream timeline(slurp(dir_a / "timeline.csv"));
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(timeline, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "k,cr,hn,nop");

    CHECK(fs::exists(dir_a / "summary.json"));
    CHECK(fs::exists(dir_a / "timing.csv"));
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("event log rows are strictly ordered") {
    const auto result = prequential_run(small_sea_config());
    REQUIRE(!result.events.empty());
    for (std::size_t i = 1; i < result.events.size(); ++i) {
        const auto& prev = result.events[i - 1];
        const auto& cur = result.events[i];
        CHECK(prev.timestamp <= cur.timestamp);
        CHECK(prev.step < cur.step);
    }
}

TEST_CASE("masking happens in the unsupervised pass only") {
    LearnerConfig lc;
    lc.seed = 5;
    Learner learner(3, 2, lc);
    learner.begin_timestamp(1);
    DataBatch batch;
    batch.index = 1;
    batch.features = {{0.2, 0.4, 0.6}, {0.8, 0.1, 0.3}};
    batch.labels = {0, 1};
    learner.test_batch(batch);
    CHECK(learner.mask_calls() == 0);
    learner.train_generative(batch);
    CHECK(learner.mask_calls() == 2);
    learner.train_discriminative(batch);
    CHECK(learner.mask_calls() == 2);

    LearnerConfig ae = lc;
    ae.variant = Variant::fixed_ae;
    Learner clean(3, 2, ae);
    clean.begin_timestamp(1);
    clean.train_generative(batch);
    CHECK(clean.mask_calls() == 0);   // the plain autoencoder never corrupts
}

TEST_CASE("csv streams run end to end") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "devdan_harness.csv";
    {
        std::ofstream out(path);
        std::mt19937_64 rng(62);
        std::uniform_real_distribution<double> unit(0.0, 10.0);
        for (int row = 0; row < 60; ++row) {
            const double f1 = unit(rng), f2 = unit(rng), f3 = unit(rng);
            out << f1 << ',' << f2 << ',' << f3 << ',' << sea_label(f1, f2, 8.0) << '\n';
        }
    }
    ExperimentConfig cfg;
    cfg.dataset.kind = DatasetKind::csv;
    cfg.dataset.csv_path = path.string();
    cfg.dataset.label_column = 3;
    cfg.dataset.classes = 2;
    cfg.batch_size = 25;
    const auto result = prequential_run(cfg);
    CHECK(result.timeline.records.size() == 3);   // 25 + 25 + 10
    CHECK(result.samples == 60);
    fs::remove(path);
}

TEST_CASE("an empty csv stream is an error") {
    namespace fs = std::filesystem;
    const auto path = fs::temp_directory_path() / "devdan_empty.csv";
    {
        std::ofstream out(path);
        out << "f1,f2,label\n";
    }
    ExperimentConfig cfg;
    cfg.dataset.kind = DatasetKind::csv;
    cfg.dataset.csv_path = path.string();
    cfg.dataset.label_column = 2;
    cfg.dataset.has_header = true;
    CHECK_THROWS(prequential_run(cfg));
    fs::remove(path);
}

TEST_CASE("report rejects an unwritable output directory") {
    auto cfg = small_sea_config();
    cfg.dataset.samples = 250;
    const auto run = prequential_run(cfg);
    CHECK_THROWS(report(cfg, aggregate(run.timeline), run, "/proc/devdan_forbidden/out"));
}

TEST_CASE("devdan on a drifting stream both grows and prunes") {
    auto cfg = small_sea_config();
    cfg.dataset.samples = 4000;
    cfg.dataset.sea_thresholds = {8.0, 9.0, 7.0, 9.5};
    const auto result = prequential_run(cfg);
    CHECK(result.grow_events >= 1);
    CHECK(result.prune_events >= 1);
    for (const auto& rec : result.timeline.records) {
        CHECK(rec.hidden >= 1);
        CHECK(rec.hidden <= 200);
    }
}
