#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcf/event_table.hpp"
#include "lcf/loss.hpp"
#include "lcf/model.hpp"

namespace lcf {

// First/second moment accumulators for the 5F trainables, laid out as
// [w_lower | b_lower | w_upper | b_upper | logits].
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t step = 0;
};

AdamState make_adam_state(std::size_t n_features);

struct TrainConfig {
    double learning_rate = 0.001;
    std::size_t batch_size = 512;
    std::size_t epochs = 200;
    Strategy strategy = Strategy::parallel;
    double threshold = 0.5;
    std::uint64_t seed = 0;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    double min_importance_ratio = 0.05;
    MaskMode sequential_mask_mode = MaskMode::cumulative;
};

struct TrainingHistory {
    std::vector<double> mean_loss;                 // one entry per epoch
    std::vector<std::vector<double>> importance;   // score snapshot per epoch
    std::size_t total_steps = 0;
};

// One bias-corrected Adam update over all trainables. Non-finite gradients or
// parameters abort with a diagnostic naming the offending entry.
void adam_step(LcfModel& model, const GradientSet& grads, AdamState& state,
               const TrainConfig& cfg);

struct TrainResult {
    LcfModel model;
    TrainingHistory history;
};

// Fits normalization on the (raw) training table, normalizes the centers with
// the same stats, then runs epochs of seeded-shuffled mini-batches under the
// configured strategy. Fully deterministic for a fixed seed and config.
TrainResult train(const EventTable& train_raw, const TrainConfig& cfg,
                  std::span<const double> centers_raw);

// CSV with columns: epoch, mean_loss, then one importance column per feature.
void write_history_csv(const TrainingHistory& history,
                       const std::vector<std::string>& feature_names,
                       const std::string& path);

} // namespace lcf
