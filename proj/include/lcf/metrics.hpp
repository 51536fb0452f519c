#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace lcf {

// Cross sections in pb, integrated luminosity in fb^-1 (1 pb = 1000 fb).
struct PhysicsConfig {
    double sigma_signal_pb = 1.0;
    double sigma_background_pb = 1e6;
    double luminosity_fb = 3000.0;
};

PhysicsConfig mock_physics();    // 1 pb signal, 10^6 pb background, 3000 fb^-1
PhysicsConfig diboson_physics(); // 0.7644 pb, 1.806e5 pb, 3000 fb^-1

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

Confusion confusion(std::span<const std::uint8_t> preds,
                    std::span<const std::uint8_t> labels);

// S / sqrt(B) with S = eps_s * sigma_s * 1000 * L, B analogous.
// eps_b == 0 returns +infinity (no background survives).
double significance(double eps_s, double eps_b, const PhysicsConfig& phys);

struct MetricsReport {
    Confusion counts;
    double accuracy = 0.0;
    double precision = 0.0;
    double eps_s = 0.0; // signal efficiency: tp / total signal
    double eps_b = 0.0; // background efficiency: fp / total background
    double significance = 0.0;
};

MetricsReport evaluate(std::span<const std::uint8_t> preds,
                       std::span<const std::uint8_t> labels,
                       const PhysicsConfig& phys);

// Aligned plain-text table (4 significant digits).
std::string format_table(const MetricsReport& report);

} // namespace lcf
