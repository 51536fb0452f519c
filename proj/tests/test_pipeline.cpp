#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lcf/csv.hpp"
#include "lcf/data.hpp"
#include "lcf/pipeline.hpp"
#include "lcf/serialize.hpp"

using namespace lcf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("lcf_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& sub = "") const { return (path / sub).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("defaults follow the training configuration of the benchmark") {
    CHECK(GenConfig{}.n_events == 200000);
    TrainConfig tc;
    CHECK(tc.learning_rate == 0.001);
    CHECK(tc.batch_size == 512);
    CHECK(tc.epochs == 200);
    CHECK(tc.threshold == 0.5);
    CHECK(tc.min_importance_ratio == 0.05);
    CHECK(tc.adam_beta1 == 0.9);
    CHECK(tc.adam_beta2 == 0.999);
    CHECK(tc.adam_eps == 1e-8);
    TrainCmdConfig tr;
    CHECK(tr.clip_lo == 5.0);
    CHECK(tr.clip_hi == 95.0);
    CHECK(tr.train_fraction == 0.5);
}

TEST_CASE("cmd_gen writes CSV, manifest and resolved config") {
    TempDir dir("gen");
    GenConfig cfg;
    cfg.dataset = "mock6";
    cfg.n_events = 2000;
    cfg.seed = 7;
    cfg.out_dir = dir.str();
    const auto out = cmd_gen(cfg);

    const auto table = load_csv(out.csv_path);
    CHECK(table.rows() == 2000);
    CHECK(table.feature_names ==
          std::vector<std::string>{"x1", "x2", "x7", "x3", "x5", "x4", "x9"});

    const auto manifest = read_json(out.manifest_path);
    CHECK(manifest.at("dataset") == "mock6");
    CHECK(manifest.at("seed") == 7);
    CHECK(fs::exists(dir.path / "gen_config.json"));

    SUBCASE("unknown dataset rejected") {
        cfg.dataset = "mock9";
        CHECK_THROWS_AS((void)cmd_gen(cfg), std::invalid_argument);
    }
}

TEST_CASE("train/report/eval pipeline on a small mock1") {
    TempDir dir("pipe");
    GenConfig gen;
    gen.dataset = "mock1";
    gen.n_events = 6000;
    gen.seed = 3;
    gen.out_dir = dir.str("data");
    const auto gen_out = cmd_gen(gen);

    TrainCmdConfig tr;
    tr.data_path = gen_out.csv_path;
    tr.out_dir = dir.str("run");
    tr.centers = {-2.0, 2.0, 0.0, 0.0};
    tr.train.epochs = 5;
    tr.train.batch_size = 256;
    tr.train.seed = 1;
    const auto tr_out = cmd_train(tr);

    CHECK(fs::exists(tr_out.model_path));
    CHECK(fs::exists(tr_out.history_path));
    CHECK(fs::exists(tr_out.test_csv_path));
    const auto manifest = read_json(tr_out.manifest_path);
    CHECK(manifest.at("clip").at("lo_pct") == 5.0);
    CHECK(manifest.at("split").at("n_train").get<std::size_t>() +
              manifest.at("split").at("n_test").get<std::size_t>() +
              manifest.at("clip").at("dropped").get<std::size_t>() ==
          6000);

    const auto model = load_model(tr_out.model_path);
    CHECK(model.feature_count() == 4);
    CHECK(model.seed == 1);

    ReportCmdConfig rp;
    rp.model_path = tr_out.model_path;
    rp.out_dir = dir.str("rep");
    rp.data_path = tr_out.test_csv_path;
    const auto rp_out = cmd_report(rp);
    CHECK(fs::exists(rp_out.report_path));
    CHECK(rp_out.plot_paths.size() == 4);
    const auto report = load_report(rp_out.report_path);
    double score_sum = 0.0;
    for (const auto& rf : report.features) score_sum += rf.importance;
    CHECK(score_sum == doctest::Approx(1.0).epsilon(1e-9));

    // plot CSV: kind header, 50 bins, then region rows
    std::ifstream plot(rp_out.plot_paths[0]);
    std::string line;
    std::getline(plot, line);
    CHECK(line == "kind,lo,hi,signal,background");
    std::size_t bins = 0, regions = 0;
    while (std::getline(plot, line)) {
        if (line.rfind("bin,", 0) == 0) ++bins;
        if (line.rfind("region,", 0) == 0) ++regions;
    }
    CHECK(bins == 50);
    CHECK(regions >= 1);

    EvalCmdConfig ev;
    ev.model_path = tr_out.model_path;
    ev.data_path = tr_out.test_csv_path;
    ev.out_dir = dir.str("eval");
    const auto ev_out = cmd_eval(ev, /*quiet=*/true);
    CHECK(fs::exists(ev_out.metrics_json_path));
    CHECK(fs::exists(ev_out.metrics_txt_path));
    CHECK(ev_out.metrics.counts.total() == load_csv(tr_out.test_csv_path).rows());

    SUBCASE("missing centers are reported by feature name") {
        TrainCmdConfig bad = tr;
        bad.centers.clear();
        bad.centers_by_name = {{"x1", -2.0}, {"x3", 0.0}};
        try {
            (void)cmd_train(bad);
            CHECK(false);
        } catch (const std::invalid_argument& e) {
            const std::string what = e.what();
            CHECK(what.find("x2") != std::string::npos);
            CHECK(what.find("x4") != std::string::npos);
        }
    }
    SUBCASE("corrupt model file is a structured error") {
        const std::string bad_path = dir.str("bad_model.json");
        std::ofstream(bad_path) << "{ not json";
        ReportCmdConfig bad;
        bad.model_path = bad_path;
        bad.out_dir = dir.str("rep_bad");
        CHECK_THROWS_AS((void)cmd_report(bad), std::runtime_error);
    }
    SUBCASE("mismatched eval columns are a hard error") {
        GenConfig other;
        other.dataset = "mock2";
        other.n_events = 2000;
        other.out_dir = dir.str("data2");
        const auto other_out = cmd_gen(other);
        EvalCmdConfig bad = ev;
        bad.data_path = other_out.csv_path;
        CHECK_THROWS_AS((void)cmd_eval(bad, true), std::invalid_argument);
    }
}

TEST_CASE("identical seed and config give byte-identical model and report files") {
    TempDir dir("det");
    GenConfig gen;
    gen.dataset = "mock2";
    gen.n_events = 4000;
    gen.seed = 11;
    gen.out_dir = dir.str("data");
    const auto gen_out = cmd_gen(gen);

    auto run = [&](const std::string& tag) {
        TrainCmdConfig tr;
        tr.data_path = gen_out.csv_path;
        tr.out_dir = dir.str(tag);
        tr.centers = {-2.0, -1.0, -3.0};
        tr.train.epochs = 4;
        tr.train.strategy = Strategy::sequential;
        tr.train.seed = 9;
        const auto out = cmd_train(tr);
        ReportCmdConfig rp;
        rp.model_path = out.model_path;
        rp.out_dir = dir.str(tag);
        (void)cmd_report(rp);
        return std::pair{slurp(out.model_path), slurp(dir.str(tag) + "/report.json")};
    };
    const auto a = run("a");
    const auto b = run("b");
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    CHECK(!a.first.empty());
}

TEST_CASE("gen CSV reload matches the generated table exactly") {
    TempDir dir("roundtrip");
    GenConfig gen;
    gen.dataset = "mock3";
    gen.n_events = 1000;
    gen.seed = 21;
    gen.out_dir = dir.str();
    const auto out = cmd_gen(gen);
    const auto direct = gen_mock(MockId::mock3, 1000, 21);
    const auto loaded = load_csv(out.csv_path);
    CHECK(loaded.values == direct.values);
    CHECK(loaded.labels == direct.labels);
}
