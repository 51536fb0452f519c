#include "lcf/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <stdexcept>
#include <thread>

#include "lcf/csv.hpp"
#include "lcf/data.hpp"
#include "lcf/extract.hpp"
#include "lcf/serialize.hpp"

namespace lcf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

json train_params_to_json(const TrainConfig& t) {
    return json{{"learning_rate", t.learning_rate},
                {"batch_size", t.batch_size},
                {"epochs", t.epochs},
                {"strategy", to_string(t.strategy)},
                {"threshold", t.threshold},
                {"seed", t.seed},
                {"adam_beta1", t.adam_beta1},
                {"adam_beta2", t.adam_beta2},
                {"adam_eps", t.adam_eps},
                {"min_importance_ratio", t.min_importance_ratio},
                {"sequential_mask_mode", to_string(t.sequential_mask_mode)}};
}

json physics_to_json(const PhysicsConfig& p) {
    return json{{"sigma_signal_pb", p.sigma_signal_pb},
                {"sigma_background_pb", p.sigma_background_pb},
                {"luminosity_fb", p.luminosity_fb}};
}

} // namespace

json gen_config_to_json(const GenConfig& c) {
    return json{{"command", "gen"},
                {"dataset", c.dataset},
                {"n_events", c.n_events},
                {"seed", c.seed},
                {"out_dir", c.out_dir}};
}

json train_config_to_json(const TrainCmdConfig& c) {
    json j{{"command", "train"},
           {"data", c.data_path},
           {"out_dir", c.out_dir},
           {"label_column", c.label_column},
           {"clip_lo", c.clip_lo},
           {"clip_hi", c.clip_hi},
           {"train_fraction", c.train_fraction}};
    j.update(train_params_to_json(c.train));
    if (!c.centers_by_name.empty())
        j["centers"] = c.centers_by_name;
    else
        j["centers"] = c.centers;
    return j;
}

json report_config_to_json(const ReportCmdConfig& c) {
    return json{{"command", "report"},
                {"model", c.model_path},
                {"out_dir", c.out_dir},
                {"min_importance_ratio", c.min_importance_ratio},
                {"data", c.data_path},
                {"bins", c.bins}};
}

json eval_config_to_json(const EvalCmdConfig& c) {
    return json{{"command", "eval"},
                {"model", c.model_path},
                {"data", c.data_path},
                {"out_dir", c.out_dir},
                {"min_importance_ratio", c.min_importance_ratio},
                {"physics", physics_to_json(c.physics)}};
}

json suite_config_to_json(const SuiteConfig& c) {
    return json{{"command", "suite"},
                {"out_dir", c.out_dir},
                {"seed", c.seed},
                {"n_events", c.n_events},
                {"epochs", c.epochs},
                {"batch_size", c.batch_size},
                {"learning_rate", c.learning_rate},
                {"clip_lo", c.clip_lo},
                {"clip_hi", c.clip_hi},
                {"workers", c.workers},
                {"diboson_csv", c.diboson_csv}};
}

GenOutputs cmd_gen(const GenConfig& cfg) {
    const auto id = parse_mock_id(cfg.dataset);
    if (!id)
        throw std::invalid_argument("unknown dataset '" + cfg.dataset +
                                    "' (expected mock1..mock6)");
    fs::create_directories(cfg.out_dir);

    const EventTable table = gen_mock(*id, cfg.n_events, cfg.seed);
    GenOutputs out;
    out.csv_path = join(cfg.out_dir, cfg.dataset + ".csv");
    save_csv(table, out.csv_path);

    json manifest{{"dataset", cfg.dataset},
                  {"seed", cfg.seed},
                  {"n_events", cfg.n_events},
                  {"feature_names", table.feature_names},
                  {"clip", nullptr}};
    out.manifest_path = join(cfg.out_dir, cfg.dataset + "_manifest.json");
    write_json(manifest, out.manifest_path);
    write_json(gen_config_to_json(cfg), join(cfg.out_dir, "gen_config.json"));
    return out;
}

static std::vector<double> resolve_centers(const TrainCmdConfig& cfg,
                                           const std::vector<std::string>& feature_names) {
    if (!cfg.centers_by_name.empty()) {
        std::vector<double> centers;
        std::string missing;
        for (const auto& name : feature_names) {
            auto it = cfg.centers_by_name.find(name);
            if (it == cfg.centers_by_name.end()) {
                if (!missing.empty()) missing += ", ";
                missing += name;
            } else {
                centers.push_back(it->second);
            }
        }
        if (!missing.empty())
            throw std::invalid_argument("no center provided for feature(s): " + missing);
        return centers;
    }
    if (cfg.centers.size() != feature_names.size())
        throw std::invalid_argument("expected " + std::to_string(feature_names.size()) +
                                    " centers, got " + std::to_string(cfg.centers.size()));
    return cfg.centers;
}

TrainOutputs cmd_train(const TrainCmdConfig& cfg) {
    if (cfg.data_path.empty()) throw std::invalid_argument("train: no input data given");
    fs::create_directories(cfg.out_dir);

    const EventTable raw = load_csv(cfg.data_path, cfg.label_column);
    const std::vector<double> centers = resolve_centers(cfg, raw.feature_names);

    ClipResult clipped = percentile_clip(raw, cfg.clip_lo, cfg.clip_hi);
    SplitResult parts = split(clipped.table, cfg.train_fraction, cfg.train.seed);

    TrainOutputs out;
    out.result = train(parts.train, cfg.train, centers);

    out.model_path = join(cfg.out_dir, "model.json");
    save_model(out.result.model, out.model_path);
    out.history_path = join(cfg.out_dir, "history.csv");
    write_history_csv(out.result.history, out.result.model.feature_names, out.history_path);
    out.test_csv_path = join(cfg.out_dir, "test_split.csv");
    save_csv(parts.test, out.test_csv_path);

    json manifest{{"data", cfg.data_path},
                  {"n_input", raw.rows()},
                  {"clip",
                   {{"lo_pct", cfg.clip_lo},
                    {"hi_pct", cfg.clip_hi},
                    {"bounds_lo", clipped.bounds.lo},
                    {"bounds_hi", clipped.bounds.hi},
                    {"dropped", clipped.dropped},
                    {"applied", "combined-before-split"}}},
                  {"split",
                   {{"train_fraction", cfg.train_fraction},
                    {"n_train", parts.train.rows()},
                    {"n_test", parts.test.rows()}}},
                  {"centers_raw", centers},
                  {"seed", cfg.train.seed},
                  {"strategy", to_string(cfg.train.strategy)}};
    out.manifest_path = join(cfg.out_dir, "train_manifest.json");
    write_json(manifest, out.manifest_path);
    write_json(train_config_to_json(cfg), join(cfg.out_dir, "train_config.json"));
    return out;
}

ReportOutputs cmd_report(const ReportCmdConfig& cfg) {
    if (cfg.model_path.empty()) throw std::invalid_argument("report: no model given");
    fs::create_directories(cfg.out_dir);

    const LcfModel model = load_model(cfg.model_path);
    const CutFlowReport report = build_report(model, cfg.min_importance_ratio);

    ReportOutputs out;
    out.report_path = join(cfg.out_dir, "report.json");
    save_report(report, out.report_path);
    if (!cfg.data_path.empty()) {
        const EventTable events = load_csv(cfg.data_path);
        out.plot_paths = write_plot_csvs(report, events, cfg.out_dir, cfg.bins);
    }
    write_json(report_config_to_json(cfg), join(cfg.out_dir, "report_config.json"));
    return out;
}

EvalOutputs cmd_eval(const EvalCmdConfig& cfg, bool quiet) {
    if (cfg.model_path.empty() || cfg.data_path.empty())
        throw std::invalid_argument("eval: model and data are both required");
    fs::create_directories(cfg.out_dir);

    const LcfModel model = load_model(cfg.model_path);
    const CutFlowReport report = build_report(model, cfg.min_importance_ratio);
    const EventTable events = load_csv(cfg.data_path);
    const std::vector<std::uint8_t> preds = apply_report(events, report);

    EvalOutputs out;
    out.metrics = evaluate(preds, events.labels, cfg.physics);
    if (std::isinf(out.metrics.significance))
        std::cerr << "warning: no background events survive the cuts; significance is infinite\n";

    out.metrics_json_path = join(cfg.out_dir, "metrics.json");
    write_json(metrics_to_json(out.metrics), out.metrics_json_path);
    out.metrics_txt_path = join(cfg.out_dir, "metrics.txt");
    {
        std::ofstream txt(out.metrics_txt_path);
        txt << format_table(out.metrics);
        if (!txt.good()) throw std::runtime_error("write failed for " + out.metrics_txt_path);
    }
    write_json(eval_config_to_json(cfg), join(cfg.out_dir, "eval_config.json"));
    if (!quiet) std::cout << format_table(out.metrics);
    return out;
}

namespace {

struct SuiteRow {
    std::string dataset;
    std::string strategy;
    MetricsReport metrics;
};

// One dataset job: generate once, clip/split once, train and evaluate both
// strategies on the same splits.
std::vector<SuiteRow> run_mock_suite_job(MockId id, const SuiteConfig& cfg) {
    const std::string name = to_string(id);
    const EventTable raw = gen_mock(id, cfg.n_events, cfg.seed);
    ClipResult clipped = percentile_clip(raw, cfg.clip_lo, cfg.clip_hi);
    SplitResult parts = split(clipped.table, 0.5, cfg.seed);
    const std::vector<double> centers = mock_centers(id);

    std::vector<SuiteRow> rows;
    for (Strategy strategy : {Strategy::parallel, Strategy::sequential}) {
        TrainConfig tc;
        tc.learning_rate = cfg.learning_rate;
        tc.batch_size = cfg.batch_size;
        tc.epochs = cfg.epochs;
        tc.strategy = strategy;
        tc.seed = cfg.seed;

        const std::string run_dir = join(cfg.out_dir, name + "_" + to_string(strategy));
        fs::create_directories(run_dir);

        TrainResult trained = train(parts.train, tc, centers);
        save_model(trained.model, join(run_dir, "model.json"));
        write_history_csv(trained.history, trained.model.feature_names,
                          join(run_dir, "history.csv"));

        const CutFlowReport report = build_report(trained.model, tc.min_importance_ratio);
        save_report(report, join(run_dir, "report.json"));
        write_plot_csvs(report, parts.test, run_dir);

        const auto preds = apply_report(parts.test, report);
        SuiteRow row;
        row.dataset = name;
        row.strategy = to_string(strategy);
        row.metrics = evaluate(preds, parts.test.labels, mock_physics());
        write_json(metrics_to_json(row.metrics), join(run_dir, "metrics.json"));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_suite_table(const std::vector<SuiteRow>& rows) {
    char line[256];
    std::string out = "dataset   strategy    TP       FP       accuracy   precision  significance\n";
    out += "--------  ----------  -------  -------  ---------  ---------  ------------\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        std::snprintf(line, sizeof(line), "%-8s  %-10s  %7zu  %7zu  %8.2f%%  %8.2f%%  ",
                      r.dataset.c_str(), r.strategy.c_str(), m.counts.tp, m.counts.fp,
                      100.0 * m.accuracy, 100.0 * m.precision);
        out += line;
        if (std::isinf(m.significance))
            out += "inf";
        else {
            std::snprintf(line, sizeof(line), "%.4g", m.significance);
            out += line;
        }
        out += "\n";
    }
    return out;
}

} // namespace

int cmd_suite(const SuiteConfig& cfg) {
    fs::create_directories(cfg.out_dir);
    write_json(suite_config_to_json(cfg), join(cfg.out_dir, "suite_config.json"));

    std::size_t workers = cfg.workers;
    if (workers == 0) {
        if (const char* env = std::getenv("LCF_WORKERS"))
            workers = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
    }
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

    const MockId ids[] = {MockId::mock1, MockId::mock2, MockId::mock3,
                          MockId::mock4, MockId::mock5, MockId::mock6};
    std::vector<SuiteRow> rows;
    std::vector<std::future<std::vector<SuiteRow>>> inflight;
    std::size_t next = 0;
    while (next < std::size(ids) || !inflight.empty()) {
        while (next < std::size(ids) && inflight.size() < workers) {
            const MockId id = ids[next++];
            inflight.push_back(std::async(std::launch::async,
                                          [id, &cfg] { return run_mock_suite_job(id, cfg); }));
        }
        auto batch = inflight.front().get();
        inflight.erase(inflight.begin());
        rows.insert(rows.end(), batch.begin(), batch.end());
        std::cout << "completed " << batch.front().dataset << "\n" << std::flush;
    }

    const std::string table = format_suite_table(rows);
    std::cout << "\n" << table;
    {
        std::ofstream txt(join(cfg.out_dir, "suite_summary.txt"));
        txt << table;
    }
    json summary = json::array();
    for (const auto& r : rows) {
        json entry = metrics_to_json(r.metrics);
        entry["dataset"] = r.dataset;
        entry["strategy"] = r.strategy;
        summary.push_back(entry);
    }
    write_json(summary, join(cfg.out_dir, "suite_summary.json"));

    if (!cfg.diboson_csv.empty()) {
        std::cout << "\nrunning diboson benchmark on " << cfg.diboson_csv << "\n";
        const EventTable raw = load_csv(cfg.diboson_csv);
        TrainCmdConfig tc;
        tc.data_path = cfg.diboson_csv;
        tc.train.epochs = cfg.epochs;
        tc.train.batch_size = cfg.batch_size;
        tc.train.learning_rate = cfg.learning_rate;
        tc.train.seed = cfg.seed;
        for (const auto& name : raw.feature_names) {
            const auto center = diboson_center(name);
            if (!center)
                throw std::invalid_argument(
                    "no built-in center for observable '" + name +
                    "'; run the train command with --centers instead");
            tc.centers_by_name[name] = *center;
        }
        for (Strategy strategy : {Strategy::parallel, Strategy::sequential}) {
            tc.train.strategy = strategy;
            tc.out_dir = join(cfg.out_dir, std::string("diboson_") + to_string(strategy));
            const TrainOutputs trained = cmd_train(tc);
            EvalCmdConfig ec;
            ec.model_path = trained.model_path;
            ec.data_path = trained.test_csv_path;
            ec.out_dir = tc.out_dir;
            ec.physics = diboson_physics();
            const EvalOutputs ev = cmd_eval(ec, /*quiet=*/true);
            std::printf("diboson %-10s accuracy %.2f%%  significance %.3g\n",
                        to_string(strategy), 100.0 * ev.metrics.accuracy,
                        ev.metrics.significance);
            if (strategy == Strategy::sequential &&
                std::abs(100.0 * ev.metrics.accuracy - 86.0) > 3.0)
                std::cout << "warning: sequential diboson accuracy deviates more than 3% "
                             "from the 86% reference\n";
        }
    }
    return 0;
}

} // namespace lcf
