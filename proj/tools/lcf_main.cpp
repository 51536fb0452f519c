// Command-line front end: gen / train / report / eval / suite.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lcf/data.hpp"
#include "lcf/pipeline.hpp"
#include "lcf/serialize.hpp"

namespace {

using nlohmann::json;

// Flags the user typed win; otherwise values from --config; otherwise defaults.
template <typename T>
void merge(const CLI::App& app, const std::string& flag, const json& cfg,
           const std::string& key, T& value) {
    const CLI::Option* opt = app.get_option_no_throw(flag);
    if (opt && opt->count() > 0) return;
    if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    return lcf::read_json(path);
}

// --centers accepts an inline comma list ("..,-2,0,0") or a path to a JSON
// object mapping feature name to center.
void parse_centers(const std::string& spec, lcf::TrainCmdConfig& cfg) {
    if (spec.empty()) return;
    if (spec.find(',') == std::string::npos && spec.find(".json") != std::string::npos) {
        const json j = lcf::read_json(spec);
        for (auto it = j.begin(); it != j.end(); ++it)
            cfg.centers_by_name[it.key()] = it.value().get<double>();
        return;
    }
    cfg.centers.clear();
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = spec.find(',', start);
        const std::string tok = spec.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!tok.empty()) cfg.centers.push_back(std::stod(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
}

lcf::Strategy parse_strategy(const std::string& s) {
    if (s == "parallel") return lcf::Strategy::parallel;
    if (s == "sequential") return lcf::Strategy::sequential;
    throw CLI::ValidationError("--strategy", "expected 'parallel' or 'sequential'");
}

lcf::MaskMode parse_mask_mode(const std::string& s) {
    if (s == "cumulative") return lcf::MaskMode::cumulative;
    if (s == "one_step") return lcf::MaskMode::one_step;
    throw CLI::ValidationError("--mask-mode", "expected 'cumulative' or 'one_step'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learnable cut flow: differentiable per-observable cuts with "
                 "trainable importance"};
    app.require_subcommand(1);

    std::string config_path;

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "Generate a synthetic mock dataset CSV");
    lcf::GenConfig gen_cfg;
    gen->add_option("dataset,--dataset", gen_cfg.dataset, "mock1..mock6");
    gen->add_option("--n", gen_cfg.n_events, "total events (balanced classes)");
    gen->add_option("--seed", gen_cfg.seed, "generation seed");
    gen->add_option("--out", gen_cfg.out_dir, "output directory");
    gen->add_option("--config", config_path, "JSON config file");

    // ---- train ----
    auto* tr = app.add_subcommand("train", "Clip, split and train a model on a CSV dataset");
    lcf::TrainCmdConfig tr_cfg;
    std::string strategy_str = "parallel";
    std::string mask_mode_str = "cumulative";
    std::string centers_spec;
    tr->add_option("--data", tr_cfg.data_path, "input CSV (header + label column)");
    tr->add_option("--label-column", tr_cfg.label_column, "label column name");
    tr->add_option("--out", tr_cfg.out_dir, "output directory");
    tr->add_option("--strategy", strategy_str, "parallel | sequential");
    tr->add_option("--epochs", tr_cfg.train.epochs, "training epochs");
    tr->add_option("--batch-size", tr_cfg.train.batch_size, "mini-batch size");
    tr->add_option("--lr", tr_cfg.train.learning_rate, "Adam learning rate");
    tr->add_option("--threshold", tr_cfg.train.threshold, "decision threshold t");
    tr->add_option("--seed", tr_cfg.train.seed, "training seed");
    tr->add_option("--min-importance-ratio", tr_cfg.train.min_importance_ratio,
                   "inference importance baseline ratio");
    tr->add_option("--mask-mode", mask_mode_str, "cumulative | one_step (sequential only)");
    tr->add_option("--centers", centers_spec,
                   "comma list in column order, or JSON file {name: center}");
    tr->add_option("--clip-lo", tr_cfg.clip_lo, "lower clip percentile");
    tr->add_option("--clip-hi", tr_cfg.clip_hi, "upper clip percentile");
    tr->add_option("--train-fraction", tr_cfg.train_fraction, "training split fraction");
    tr->add_option("--config", config_path, "JSON config file");

    // ---- report ----
    auto* rp = app.add_subcommand("report", "Extract human-readable cuts from a model");
    lcf::ReportCmdConfig rp_cfg;
    rp->add_option("--model", rp_cfg.model_path, "model JSON");
    rp->add_option("--out", rp_cfg.out_dir, "output directory");
    rp->add_option("--min-importance-ratio", rp_cfg.min_importance_ratio,
                   "inference importance baseline ratio");
    rp->add_option("--data", rp_cfg.data_path, "optional CSV for plot-data export");
    rp->add_option("--bins", rp_cfg.bins, "histogram bins for plot data");
    rp->add_option("--config", config_path, "JSON config file");

    // ---- eval ----
    auto* ev = app.add_subcommand("eval", "Evaluate a model's cuts on a labelled CSV");
    lcf::EvalCmdConfig ev_cfg;
    std::string physics_preset = "mock";
    ev->add_option("--model", ev_cfg.model_path, "model JSON");
    ev->add_option("--data", ev_cfg.data_path, "test CSV");
    ev->add_option("--out", ev_cfg.out_dir, "output directory");
    ev->add_option("--min-importance-ratio", ev_cfg.min_importance_ratio,
                   "inference importance baseline ratio");
    ev->add_option("--physics", physics_preset, "mock | diboson");
    ev->add_option("--sigma-signal", ev_cfg.physics.sigma_signal_pb, "signal cross section [pb]");
    ev->add_option("--sigma-background", ev_cfg.physics.sigma_background_pb,
                   "background cross section [pb]");
    ev->add_option("--luminosity", ev_cfg.physics.luminosity_fb,
                   "integrated luminosity [fb^-1]");
    ev->add_option("--config", config_path, "JSON config file");

    // ---- suite ----
    auto* su = app.add_subcommand("suite", "Run the full Mock1-Mock6 sweep (both strategies)");
    lcf::SuiteConfig su_cfg;
    su->add_option("--out", su_cfg.out_dir, "output directory");
    su->add_option("--seed", su_cfg.seed, "seed for every run");
    su->add_option("--n", su_cfg.n_events, "events per dataset");
    su->add_option("--epochs", su_cfg.epochs, "training epochs");
    su->add_option("--batch-size", su_cfg.batch_size, "mini-batch size");
    su->add_option("--lr", su_cfg.learning_rate, "Adam learning rate");
    su->add_option("--clip-lo", su_cfg.clip_lo, "lower clip percentile for mock runs");
    su->add_option("--clip-hi", su_cfg.clip_hi, "upper clip percentile for mock runs");
    su->add_option("--workers", su_cfg.workers, "concurrent dataset jobs (0 = auto)");
    su->add_option("--diboson", su_cfg.diboson_csv,
                   "optional diboson CSV; reports the external benchmark");
    su->add_option("--config", config_path, "JSON config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            const json cfg = load_config_file(config_path);
            merge(*gen, "--dataset", cfg, "dataset", gen_cfg.dataset);
            merge(*gen, "--n", cfg, "n_events", gen_cfg.n_events);
            merge(*gen, "--seed", cfg, "seed", gen_cfg.seed);
            merge(*gen, "--out", cfg, "out_dir", gen_cfg.out_dir);
            const auto out = lcf::cmd_gen(gen_cfg);
            std::cout << "wrote " << out.csv_path << "\n";
        } else if (tr->parsed()) {
            const json cfg = load_config_file(config_path);
            merge(*tr, "--data", cfg, "data", tr_cfg.data_path);
            merge(*tr, "--label-column", cfg, "label_column", tr_cfg.label_column);
            merge(*tr, "--out", cfg, "out_dir", tr_cfg.out_dir);
            merge(*tr, "--strategy", cfg, "strategy", strategy_str);
            merge(*tr, "--epochs", cfg, "epochs", tr_cfg.train.epochs);
            merge(*tr, "--batch-size", cfg, "batch_size", tr_cfg.train.batch_size);
            merge(*tr, "--lr", cfg, "learning_rate", tr_cfg.train.learning_rate);
            merge(*tr, "--threshold", cfg, "threshold", tr_cfg.train.threshold);
            merge(*tr, "--seed", cfg, "seed", tr_cfg.train.seed);
            merge(*tr, "--min-importance-ratio", cfg, "min_importance_ratio",
                  tr_cfg.train.min_importance_ratio);
            merge(*tr, "--mask-mode", cfg, "sequential_mask_mode", mask_mode_str);
            merge(*tr, "--clip-lo", cfg, "clip_lo", tr_cfg.clip_lo);
            merge(*tr, "--clip-hi", cfg, "clip_hi", tr_cfg.clip_hi);
            merge(*tr, "--train-fraction", cfg, "train_fraction", tr_cfg.train_fraction);
            // config-file-only knobs
            tr_cfg.train.adam_beta1 = cfg.value("adam_beta1", tr_cfg.train.adam_beta1);
            tr_cfg.train.adam_beta2 = cfg.value("adam_beta2", tr_cfg.train.adam_beta2);
            tr_cfg.train.adam_eps = cfg.value("adam_eps", tr_cfg.train.adam_eps);
            tr_cfg.train.strategy = parse_strategy(strategy_str);
            tr_cfg.train.sequential_mask_mode = parse_mask_mode(mask_mode_str);
            parse_centers(centers_spec, tr_cfg);
            if (centers_spec.empty() && cfg.contains("centers")) {
                const auto& cj = cfg.at("centers");
                if (cj.is_object())
                    for (auto it = cj.begin(); it != cj.end(); ++it)
                        tr_cfg.centers_by_name[it.key()] = it.value().get<double>();
                else
                    tr_cfg.centers = cj.get<std::vector<double>>();
            }
            const auto out = lcf::cmd_train(tr_cfg);
            std::cout << "wrote " << out.model_path << "\n";
        } else if (rp->parsed()) {
            const json cfg = load_config_file(config_path);
            merge(*rp, "--model", cfg, "model", rp_cfg.model_path);
            merge(*rp, "--out", cfg, "out_dir", rp_cfg.out_dir);
            merge(*rp, "--min-importance-ratio", cfg, "min_importance_ratio",
                  rp_cfg.min_importance_ratio);
            merge(*rp, "--data", cfg, "data", rp_cfg.data_path);
            merge(*rp, "--bins", cfg, "bins", rp_cfg.bins);
            const auto out = lcf::cmd_report(rp_cfg);
            std::cout << "wrote " << out.report_path << "\n";
        } else if (ev->parsed()) {
            const json cfg = load_config_file(config_path);
            merge(*ev, "--model", cfg, "model", ev_cfg.model_path);
            merge(*ev, "--data", cfg, "data", ev_cfg.data_path);
            merge(*ev, "--out", cfg, "out_dir", ev_cfg.out_dir);
            merge(*ev, "--min-importance-ratio", cfg, "min_importance_ratio",
                  ev_cfg.min_importance_ratio);
            merge(*ev, "--physics", cfg, "physics_preset", physics_preset);
            const auto* preset_opt = ev->get_option_no_throw("--physics");
            if ((preset_opt && preset_opt->count() > 0) || cfg.contains("physics_preset")) {
                if (physics_preset == "mock")
                    ev_cfg.physics = lcf::mock_physics();
                else if (physics_preset == "diboson")
                    ev_cfg.physics = lcf::diboson_physics();
                else
                    throw CLI::ValidationError("--physics", "expected 'mock' or 'diboson'");
            }
            const json phys_cfg = cfg.value("physics", json::object());
            merge(*ev, "--sigma-signal", phys_cfg, "sigma_signal_pb",
                  ev_cfg.physics.sigma_signal_pb);
            merge(*ev, "--sigma-background", phys_cfg, "sigma_background_pb",
                  ev_cfg.physics.sigma_background_pb);
            merge(*ev, "--luminosity", phys_cfg, "luminosity_fb",
                  ev_cfg.physics.luminosity_fb);
            lcf::cmd_eval(ev_cfg);
        } else if (su->parsed()) {
            const json cfg = load_config_file(config_path);
            merge(*su, "--out", cfg, "out_dir", su_cfg.out_dir);
            merge(*su, "--seed", cfg, "seed", su_cfg.seed);
            merge(*su, "--n", cfg, "n_events", su_cfg.n_events);
            merge(*su, "--epochs", cfg, "epochs", su_cfg.epochs);
            merge(*su, "--batch-size", cfg, "batch_size", su_cfg.batch_size);
            merge(*su, "--lr", cfg, "learning_rate", su_cfg.learning_rate);
            merge(*su, "--clip-lo", cfg, "clip_lo", su_cfg.clip_lo);
            merge(*su, "--clip-hi", cfg, "clip_hi", su_cfg.clip_hi);
            merge(*su, "--workers", cfg, "workers", su_cfg.workers);
            merge(*su, "--diboson", cfg, "diboson_csv", su_cfg.diboson_csv);
            return lcf::cmd_suite(su_cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
