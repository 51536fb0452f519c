#include "lcf/model.hpp"

#include <algorithm>
#include <stdexcept>

#include "lcf/rng.hpp"

namespace lcf {

std::vector<double> ImportanceVector::scores() const {
    // Max-shifted softmax for stability.
    std::vector<double> out(logits.size());
    if (logits.empty()) return out;
    double m = *std::max_element(logits.begin(), logits.end());
    double total = 0.0;
    for (std::size_t j = 0; j < logits.size(); ++j) {
        out[j] = std::exp(logits[j] - m);
        total += out[j];
    }
    for (auto& s : out) s /= total;
    return out;
}

LcfModel init_model(std::vector<std::string> feature_names, NormalizationStats norm,
                    std::span<const double> centers_norm, double threshold,
                    std::uint64_t seed) {
    const std::size_t f = feature_names.size();
    if (centers_norm.size() != f)
        throw std::invalid_argument("init_model: expected one center per feature");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw std::invalid_argument("init_model: threshold must lie in (0, 1)");

    LcfModel model;
    model.feature_names = std::move(feature_names);
    model.norm = std::move(norm);
    model.threshold = threshold;
    model.seed = seed;
    model.params.resize(f);
    model.importance.logits.assign(f, 0.0);

    rng::Engine eng(rng::substream_seed(seed, "init"));
    auto draw_weight = [&eng]() {
        double w;
        do {
            w = rng::uniform(eng, -1.0, 1.0);
        } while (std::abs(w) < 0.1); // avoid a flat-gradient start
        return w;
    };
    for (std::size_t j = 0; j < f; ++j) {
        model.params[j].w_lower = draw_weight();
        model.params[j].w_upper = draw_weight();
        model.params[j].b_lower = 0.0;
        model.params[j].b_upper = 0.0;
        model.params[j].center_norm = centers_norm[j];
    }
    return model;
}

ForwardResult forward(const EventTable& batch_norm, const LcfModel& model) {
    const std::size_t f = model.feature_count();
    if (batch_norm.cols() != f)
        throw std::invalid_argument("forward: batch has " + std::to_string(batch_norm.cols()) +
                                    " features, model expects " + std::to_string(f));
    if (!batch_norm.normalized)
        throw std::invalid_argument("forward: batch must be normalized");

    const std::size_t n = batch_norm.rows();
    ForwardResult out;
    out.rows = n;
    out.cols = f;
    out.lower.resize(n * f);
    out.upper.resize(n * f);

    const std::vector<double> scores = model.importance.scores();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) {
            const double x_scaled = scale_input(batch_norm.at(i, j), scores[j]);
            const auto& p = model.params[j];
            out.lower[i * f + j] = cut_output(x_scaled, p.w_lower, p.b_lower);
            out.upper[i * f + j] = cut_output(x_scaled, p.w_upper, p.b_upper);
        }
    }
    return out;
}

} // namespace lcf
