#include "lcf/optim.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "lcf/data.hpp"
#include "lcf/rng.hpp"

namespace lcf {

AdamState make_adam_state(std::size_t n_features) {
    AdamState state;
    state.m.assign(5 * n_features, 0.0);
    state.v.assign(5 * n_features, 0.0);
    return state;
}

namespace {

const char* kBlockNames[5] = {"w_lower", "b_lower", "w_upper", "b_upper", "logit"};

[[noreturn]] void bad_value(const char* what, std::size_t block, std::size_t j) {
    throw std::runtime_error(std::string(what) + " for " + kBlockNames[block] + "[" +
                             std::to_string(j) + "]");
}

} // namespace

void adam_step(LcfModel& model, const GradientSet& grads, AdamState& state,
               const TrainConfig& cfg) {
    const std::size_t f = model.feature_count();
    if (state.m.size() != 5 * f)
        throw std::invalid_argument("adam_step: state size mismatch");

    const double* grad_blocks[5] = {grads.d_w_lower.data(), grads.d_b_lower.data(),
                                    grads.d_w_upper.data(), grads.d_b_upper.data(),
                                    grads.d_logits.data()};
    state.step += 1;
    const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(state.step));

    for (std::size_t block = 0; block < 5; ++block) {
        for (std::size_t j = 0; j < f; ++j) {
            const double g = grad_blocks[block][j];
            if (!std::isfinite(g)) bad_value("non-finite gradient", block, j);
            const std::size_t k = block * f + j;
            state.m[k] = cfg.adam_beta1 * state.m[k] + (1.0 - cfg.adam_beta1) * g;
            state.v[k] = cfg.adam_beta2 * state.v[k] + (1.0 - cfg.adam_beta2) * g * g;
            const double m_hat = state.m[k] / bc1;
            const double v_hat = state.v[k] / bc2;
            const double delta = cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);

            double* param = nullptr;
            switch (block) {
                case 0: param = &model.params[j].w_lower; break;
                case 1: param = &model.params[j].b_lower; break;
                case 2: param = &model.params[j].w_upper; break;
                case 3: param = &model.params[j].b_upper; break;
                case 4: param = &model.importance.logits[j]; break;
            }
            *param -= delta;
            if (!std::isfinite(*param)) bad_value("non-finite parameter", block, j);
        }
    }
}

TrainResult train(const EventTable& train_raw, const TrainConfig& cfg,
                  std::span<const double> centers_raw) {
    if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be > 0");
    if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0))
        throw std::invalid_argument("train: threshold must lie in (0, 1)");
    if (train_raw.rows() == 0) throw std::invalid_argument("train: empty training table");
    if (!labels_binary(train_raw)) throw std::invalid_argument("train: labels must be 0/1");
    if (centers_raw.size() != train_raw.cols())
        throw std::invalid_argument("train: one center per feature required");

    const NormalizationStats stats = fit_normalizer(train_raw);
    const EventTable table = apply_normalizer(train_raw, stats);

    const std::size_t f = table.cols();
    const std::size_t n = table.rows();
    std::vector<double> centers_norm(f);
    for (std::size_t j = 0; j < f; ++j)
        centers_norm[j] = (centers_raw[j] - stats.mean[j]) / stats.stddev[j];

    TrainResult result;
    result.model = init_model(table.feature_names, stats, centers_norm, cfg.threshold, cfg.seed);
    AdamState adam = make_adam_state(f);

    std::vector<std::size_t> batch_idx;
    batch_idx.reserve(cfg.batch_size);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng::Engine eng(rng::substream_seed(cfg.seed, "shuffle|epoch=" + std::to_string(epoch)));
        const auto perm = rng::permutation(n, eng);

        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < n; start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, n);
            batch_idx.assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                             perm.begin() + static_cast<std::ptrdiff_t>(end));
            const EventTable batch = select_rows(table, batch_idx);

            double batch_loss = 0.0;
            const GradientSet grads = gradients(batch, result.model, cfg.strategy,
                                                cfg.sequential_mask_mode, &batch_loss);
            adam_step(result.model, grads, adam, cfg);
            epoch_loss += batch_loss * static_cast<double>(batch.rows());
        }
        result.history.mean_loss.push_back(epoch_loss / static_cast<double>(n));
        result.history.importance.push_back(result.model.importance.scores());
    }
    result.history.total_steps = static_cast<std::size_t>(adam.step);
    return result;
}

void write_history_csv(const TrainingHistory& history,
                       const std::vector<std::string>& feature_names,
                       const std::string& path) {
    std::ofstream file(path);
    if (!file.is_open()) throw std::runtime_error("cannot write " + path);
    file << "epoch,mean_loss";
    for (const auto& name : feature_names) file << ",importance_" << name;
    file << "\n";
    char buf[40];
    for (std::size_t e = 0; e < history.mean_loss.size(); ++e) {
        file << (e + 1);
        std::snprintf(buf, sizeof(buf), "%.17g", history.mean_loss[e]);
        file << ',' << buf;
        for (double s : history.importance[e]) {
            std::snprintf(buf, sizeof(buf), "%.17g", s);
            file << ',' << buf;
        }
        file << "\n";
    }
    if (!file.good()) throw std::runtime_error("write failed for " + path);
}

} // namespace lcf
