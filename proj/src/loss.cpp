#include "lcf/loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcf {

const char* to_string(Strategy s) {
    return s == Strategy::parallel ? "parallel" : "sequential";
}

const char* to_string(MaskMode m) {
    return m == MaskMode::cumulative ? "cumulative" : "one_step";
}

double bce(double y, double yhat) {
    const double p = std::clamp(yhat, kPredClamp, 1.0 - kPredClamp);
    return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

CenterMasks center_masks(const EventTable& batch_norm, std::span<const double> centers_norm) {
    if (batch_norm.cols() != centers_norm.size())
        throw std::invalid_argument("center_masks: one center per feature required");
    CenterMasks masks;
    masks.rows = batch_norm.rows();
    masks.cols = batch_norm.cols();
    masks.lower.resize(masks.rows * masks.cols);
    masks.upper.resize(masks.rows * masks.cols);
    for (std::size_t i = 0; i < masks.rows; ++i) {
        for (std::size_t j = 0; j < masks.cols; ++j) {
            // Ties go to the upper mask so every event feeds exactly one side.
            const bool below = batch_norm.at(i, j) < centers_norm[j];
            masks.lower[i * masks.cols + j] = below ? 1 : 0;
            masks.upper[i * masks.cols + j] = below ? 0 : 1;
        }
    }
    return masks;
}

SequentialMask sequential_masks(const ForwardResult& outputs, double t, MaskMode mode) {
    SequentialMask sm;
    sm.rows = outputs.rows;
    sm.cols = outputs.cols;
    sm.mask.assign(sm.rows * sm.cols, 0);
    for (std::size_t i = 0; i < sm.rows; ++i) {
        std::uint8_t alive = 1; // mask_{i,0} = 1 always
        for (std::size_t j = 0; j < sm.cols; ++j) {
            sm.mask[i * sm.cols + j] = alive;
            const bool pass = outputs.lower_at(i, j) >= t && outputs.upper_at(i, j) >= t;
            if (mode == MaskMode::cumulative)
                alive = static_cast<std::uint8_t>(alive && pass);
            else
                alive = pass ? 1 : 0;
        }
    }
    return sm;
}

namespace {

// Single fused pass over a batch producing the mean loss and, when `grads` is
// non-null, the analytic gradient of that loss. Center and sequential masks
// are constants for differentiation; only the sigmoid/BCE chain contributes.
void accumulate(const EventTable& batch, const LcfModel& model, Strategy strategy,
                MaskMode mode, GradientSet* grads, double* loss_out) {
    const std::size_t f = model.feature_count();
    const std::size_t n = batch.rows();
    if (batch.cols() != f)
        throw std::invalid_argument("loss: batch/model feature count mismatch");
    if (!batch.normalized)
        throw std::invalid_argument("loss: batch must be normalized");
    if (n == 0)
        throw std::invalid_argument("loss: empty batch (mean undefined)");

    const std::vector<double> scores = model.importance.scores();
    const double t = model.threshold;

    std::vector<double> d_wl(f, 0.0), d_bl(f, 0.0), d_wu(f, 0.0), d_bu(f, 0.0);
    std::vector<double> delta(f, 0.0); // dL/d(score_j), pre-Jacobian
    double loss_sum = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const double y = static_cast<double>(batch.labels[i]);
        std::uint8_t alive = 1;
        for (std::size_t j = 0; j < f; ++j) {
            const auto& p = model.params[j];
            const double x = batch.at(i, j);
            const double xs = scores[j] * x;
            const double yl = cut_output(xs, p.w_lower, p.b_lower);
            const double yu = cut_output(xs, p.w_upper, p.b_upper);

            const double seq_w = (strategy == Strategy::sequential)
                                     ? static_cast<double>(alive)
                                     : 1.0;
            if (seq_w != 0.0) {
                const bool below = x < p.center_norm;
                if (below) {
                    loss_sum += 0.5 * seq_w * bce(y, yl);
                    if (grads) {
                        const double g = 0.5 * seq_w * (yl - y); // d(bce o sigmoid)/dz
                        d_wl[j] += g * xs;
                        d_bl[j] -= g;
                        delta[j] += g * p.w_lower * x;
                    }
                } else {
                    loss_sum += 0.5 * seq_w * bce(y, yu);
                    if (grads) {
                        const double g = 0.5 * seq_w * (yu - y);
                        d_wu[j] += g * xs;
                        d_bu[j] -= g;
                        delta[j] += g * p.w_upper * x;
                    }
                }
            }

            if (strategy == Strategy::sequential) {
                const bool pass = yl >= t && yu >= t;
                if (mode == MaskMode::cumulative)
                    alive = static_cast<std::uint8_t>(alive && pass);
                else
                    alive = pass ? 1 : 0;
            }
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    if (loss_out) *loss_out = loss_sum * inv_n;

    if (grads) {
        grads->d_w_lower.resize(f);
        grads->d_b_lower.resize(f);
        grads->d_w_upper.resize(f);
        grads->d_b_upper.resize(f);
        grads->d_logits.resize(f);
        for (std::size_t j = 0; j < f; ++j) {
            grads->d_w_lower[j] = d_wl[j] * inv_n;
            grads->d_b_lower[j] = d_bl[j] * inv_n;
            grads->d_w_upper[j] = d_wu[j] * inv_n;
            grads->d_b_upper[j] = d_bu[j] * inv_n;
            delta[j] *= inv_n;
        }
        // Softmax Jacobian: dL/ds_k = s'_k (delta_k - sum_j s'_j delta_j).
        double baseline = 0.0;
        for (std::size_t j = 0; j < f; ++j) baseline += scores[j] * delta[j];
        for (std::size_t k = 0; k < f; ++k)
            grads->d_logits[k] = scores[k] * (delta[k] - baseline);
    }
}

} // namespace

double parallel_loss(const EventTable& batch_norm, const LcfModel& model) {
    double loss = 0.0;
    accumulate(batch_norm, model, Strategy::parallel, MaskMode::cumulative, nullptr, &loss);
    return loss;
}

double sequential_loss(const EventTable& batch_norm, const LcfModel& model, MaskMode mode) {
    double loss = 0.0;
    accumulate(batch_norm, model, Strategy::sequential, mode, nullptr, &loss);
    return loss;
}

GradientSet gradients(const EventTable& batch_norm, const LcfModel& model,
                      Strategy strategy, MaskMode mode, double* loss_out) {
    GradientSet grads;
    accumulate(batch_norm, model, strategy, mode, &grads, loss_out);
    return grads;
}

} // namespace lcf
