#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcf/metrics.hpp"
#include "lcf/optim.hpp"

namespace lcf {

// Each command's parameters round-trip through a JSON config file; flags the
// user did not set on the command line fall back to the file's values. The
// fully resolved config is written next to every output for provenance.

struct GenConfig {
    std::string dataset = "mock1";
    std::size_t n_events = 200000;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

struct TrainCmdConfig {
    std::string data_path;
    std::string out_dir = ".";
    std::string label_column = "label";
    TrainConfig train;
    double clip_lo = 5.0;
    double clip_hi = 95.0;
    double train_fraction = 0.5;
    // Centers either positional (column order) or by feature name; by-name
    // wins when both are present.
    std::vector<double> centers;
    std::map<std::string, double> centers_by_name;
};

struct ReportCmdConfig {
    std::string model_path;
    std::string out_dir = ".";
    double min_importance_ratio = 0.05;
    std::string data_path; // optional; enables plot-data export
    int bins = 50;
};

struct EvalCmdConfig {
    std::string model_path;
    std::string data_path;
    std::string out_dir = ".";
    double min_importance_ratio = 0.05;
    PhysicsConfig physics = mock_physics();
};

struct SuiteConfig {
    std::string out_dir = "suite_out";
    std::uint64_t seed = 5;
    std::size_t n_events = 200000;
    std::size_t epochs = 200;
    std::size_t batch_size = 512;
    double learning_rate = 0.001;
    // Mock runs reproduce the benchmark tables, which use the full Gaussian
    // samples; clipping stays available for external data via `train`.
    double clip_lo = 0.0;
    double clip_hi = 100.0;
    std::size_t workers = 0; // 0 = hardware concurrency
    std::string diboson_csv; // optional external benchmark (clipped 5/95)
};

nlohmann::json gen_config_to_json(const GenConfig&);
nlohmann::json train_config_to_json(const TrainCmdConfig&);
nlohmann::json report_config_to_json(const ReportCmdConfig&);
nlohmann::json eval_config_to_json(const EvalCmdConfig&);
nlohmann::json suite_config_to_json(const SuiteConfig&);

struct GenOutputs {
    std::string csv_path;
    std::string manifest_path;
};

struct TrainOutputs {
    std::string model_path;
    std::string history_path;
    std::string test_csv_path;
    std::string manifest_path;
    TrainResult result;
};

struct ReportOutputs {
    std::string report_path;
    std::vector<std::string> plot_paths;
};

struct EvalOutputs {
    std::string metrics_json_path;
    std::string metrics_txt_path;
    MetricsReport metrics;
};

GenOutputs cmd_gen(const GenConfig& cfg);

// Pipeline: load -> percentile clip -> stratified split -> train. Writes
// model.json, history.csv, the held-out test split, and a manifest recording
// clip bounds and split sizes.
TrainOutputs cmd_train(const TrainCmdConfig& cfg);

ReportOutputs cmd_report(const ReportCmdConfig& cfg);

EvalOutputs cmd_eval(const EvalCmdConfig& cfg, bool quiet = false);

// Full Mock1-Mock6 sweep under both strategies; prints a summary table and
// writes per-run outputs under out_dir. With a diboson CSV it additionally
// reports the sequential benchmark and warns (never fails) on large deviation
// from the reference accuracy. Returns 0 when every run completed.
int cmd_suite(const SuiteConfig& cfg);

} // namespace lcf
