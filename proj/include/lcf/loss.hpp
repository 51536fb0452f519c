#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lcf/event_table.hpp"
#include "lcf/model.hpp"

namespace lcf {

// Predictions are clamped to [kPredClamp, 1 - kPredClamp] inside bce.
inline constexpr double kPredClamp = 1e-7;

double bce(double y, double yhat);

enum class Strategy { parallel, sequential };

// Sequential masking: cumulative ANDs every earlier cut's decision (an event
// once cut never returns); one_step uses only the immediately preceding cut.
enum class MaskMode { cumulative, one_step };

const char* to_string(Strategy s);
const char* to_string(MaskMode m);

// lower_ij = 1 iff x_ij < center_j, upper_ij = 1 otherwise (ties go upper).
struct CenterMasks {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> lower;
    std::vector<std::uint8_t> upper;

    std::uint8_t lower_at(std::size_t i, std::size_t j) const { return lower[i * cols + j]; }
    std::uint8_t upper_at(std::size_t i, std::size_t j) const { return upper[i * cols + j]; }
};

CenterMasks center_masks(const EventTable& batch_norm, std::span<const double> centers_norm);

// mask_{i,0} = 1; mask_{i,j} gates feature j by the decisions of feature j-1
// (and, in cumulative mode, all earlier features). Theta(0) = 1.
struct SequentialMask {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> mask;

    std::uint8_t at(std::size_t i, std::size_t j) const { return mask[i * cols + j]; }
};

SequentialMask sequential_masks(const ForwardResult& outputs, double t,
                                MaskMode mode = MaskMode::cumulative);

// Mean over events of sum over features of the center-masked half losses.
double parallel_loss(const EventTable& batch_norm, const LcfModel& model);

// As parallel_loss but with each term additionally gated by the sequential mask.
double sequential_loss(const EventTable& batch_norm, const LcfModel& model,
                       MaskMode mode = MaskMode::cumulative);

// Analytic gradients for every trainable. Masks are constants: nothing flows
// through the Heaviside decisions or the center split.
struct GradientSet {
    std::vector<double> d_w_lower;
    std::vector<double> d_b_lower;
    std::vector<double> d_w_upper;
    std::vector<double> d_b_upper;
    std::vector<double> d_logits; // sums to zero (softmax gauge)
};

GradientSet gradients(const EventTable& batch_norm, const LcfModel& model,
                      Strategy strategy, MaskMode mode = MaskMode::cumulative,
                      double* loss_out = nullptr);

} // namespace lcf
