#include "lcf/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace lcf {

PhysicsConfig mock_physics() { return {1.0, 1e6, 3000.0}; }

PhysicsConfig diboson_physics() { return {0.7644, 1.806e5, 3000.0}; }

Confusion confusion(std::span<const std::uint8_t> preds,
                    std::span<const std::uint8_t> labels) {
    if (preds.size() != labels.size())
        throw std::invalid_argument("confusion: predictions/labels length mismatch");
    if (preds.empty()) throw std::invalid_argument("confusion: empty input");
    Confusion c;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (labels[i]) {
            if (preds[i]) ++c.tp; else ++c.fn;
        } else {
            if (preds[i]) ++c.fp; else ++c.tn;
        }
    }
    return c;
}

double significance(double eps_s, double eps_b, const PhysicsConfig& phys) {
    constexpr double kFbPerPb = 1000.0;
    const double s = eps_s * phys.sigma_signal_pb * kFbPerPb * phys.luminosity_fb;
    if (eps_b <= 0.0) return std::numeric_limits<double>::infinity();
    const double b = eps_b * phys.sigma_background_pb * kFbPerPb * phys.luminosity_fb;
    return s / std::sqrt(b);
}

MetricsReport evaluate(std::span<const std::uint8_t> preds,
                       std::span<const std::uint8_t> labels,
                       const PhysicsConfig& phys) {
    MetricsReport report;
    report.counts = confusion(preds, labels);
    const auto& c = report.counts;
    const std::size_t n_sig = c.tp + c.fn;
    const std::size_t n_bkg = c.fp + c.tn;
    report.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    report.precision =
        (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
    report.eps_s = n_sig > 0 ? static_cast<double>(c.tp) / static_cast<double>(n_sig) : 0.0;
    report.eps_b = n_bkg > 0 ? static_cast<double>(c.fp) / static_cast<double>(n_bkg) : 0.0;
    report.significance = significance(report.eps_s, report.eps_b, phys);
    return report;
}

std::string format_table(const MetricsReport& r) {
    char line[256];
    std::string out;
    out += "  Metric         Value\n";
    out += "  -------------  ------------\n";
    std::snprintf(line, sizeof(line), "  %-13s  %zu\n", "TP", r.counts.tp);
    out += line;
    std::snprintf(line, sizeof(line), "  %-13s  %zu\n", "FP", r.counts.fp);
    out += line;
    std::snprintf(line, sizeof(line), "  %-13s  %zu\n", "TN", r.counts.tn);
    out += line;
    std::snprintf(line, sizeof(line), "  %-13s  %zu\n", "FN", r.counts.fn);
    out += line;
    std::snprintf(line, sizeof(line), "  %-13s  %.4g%%\n", "Accuracy", 100.0 * r.accuracy);
    out += line;
    std::snprintf(line, sizeof(line), "  %-13s  %.4g%%\n", "Precision", 100.0 * r.precision);
    out += line;
    std::snprintf(line, sizeof(line), "  %-13s  %.4g\n", "eps_s", r.eps_s);
    out += line;
    std::snprintf(line, sizeof(line), "  %-13s  %.4g\n", "eps_b", r.eps_b);
    out += line;
    if (std::isinf(r.significance))
        std::snprintf(line, sizeof(line), "  %-13s  inf (no background survives)\n", "Significance");
    else
        std::snprintf(line, sizeof(line), "  %-13s  %.4g\n", "Significance", r.significance);
    out += line;
    return out;
}

} // namespace lcf
