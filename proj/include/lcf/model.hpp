#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcf/event_table.hpp"

namespace lcf {

// Features with std below this are unusable as cuts and rejected at fit time.
inline constexpr double kMinFeatureStd = 1e-12;

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Inverse logistic; p must be strictly inside (0, 1).
inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Importance scaling of a normalized input.
inline double scale_input(double x_norm, double score) { return score * x_norm; }

// One learnable cut neuron: sigma(w * x_scaled - b), strictly inside (0, 1).
inline double cut_output(double x_scaled, double w, double b) {
    return sigmoid(w * x_scaled - b);
}

// Per-feature standardization constants, fitted on the training split only.
struct NormalizationStats {
    std::vector<double> mean;
    std::vector<double> stddev;
    std::string source; // provenance of the table the stats were fitted on
};

// Trainable quadruple for one feature's lower/upper cut pair. center_norm is
// the fixed split point in normalized units and never trains.
struct FeatureCutParams {
    double w_lower = 0.0;
    double b_lower = 0.0;
    double w_upper = 0.0;
    double b_upper = 0.0;
    double center_norm = 0.0;
};

// Trainable logits; scores are always re-derived via softmax, never cached.
struct ImportanceVector {
    std::vector<double> logits;
    std::vector<double> scores() const;
};

struct LcfModel {
    std::vector<std::string> feature_names;
    std::vector<FeatureCutParams> params; // one per feature, in column order
    ImportanceVector importance;
    NormalizationStats norm;
    double threshold = 0.5;
    std::uint64_t seed = 0;

    std::size_t feature_count() const { return feature_names.size(); }
};

// Fresh model: w_lower/w_upper ~ U(-1,1) redrawn while |w| < 0.1, biases and
// logits zero. Deterministic under the seed.
LcfModel init_model(std::vector<std::string> feature_names, NormalizationStats norm,
                    std::span<const double> centers_norm, double threshold,
                    std::uint64_t seed);

// (y_lower, y_upper) sigmoid outputs for every event and feature.
struct ForwardResult {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> lower; // row-major
    std::vector<double> upper;

    double lower_at(std::size_t i, std::size_t j) const { return lower[i * cols + j]; }
    double upper_at(std::size_t i, std::size_t j) const { return upper[i * cols + j]; }
};

// Both sides are evaluated for every event; center masking happens in the
// loss, not here. The batch must be normalized with the model's stats.
ForwardResult forward(const EventTable& batch_norm, const LcfModel& model);

} // namespace lcf
