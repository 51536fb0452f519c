#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lcf/event_table.hpp"
#include "lcf/model.hpp"

namespace lcf {

enum class MockId { mock1, mock2, mock3, mock4, mock5, mock6 };

std::optional<MockId> parse_mock_id(std::string_view name);
const char* to_string(MockId id);

// Column order of each mock dataset (mock6 is mock5 reordered).
const std::vector<std::string>& mock_features(MockId id);

// Fixed raw-unit split centers for the ten mock features.
double mock_center(const std::string& feature);
std::vector<double> mock_centers(MockId id);

// Split centers for the six diboson observables, keyed by CSV column name.
std::optional<double> diboson_center(const std::string& observable);

// Balanced signal/background table (n_events/2 each), rows shuffled.
// Per-feature sampling streams are keyed by (seed, feature, class) only, so
// datasets sharing a feature and seed share its sample values column-for-column.
EventTable gen_mock(MockId id, std::size_t n_events, std::uint64_t seed);

// Linear-interpolation percentile of an unsorted sample (values are copied).
double percentile(std::span<const double> values, double pct);

struct ClipBounds {
    std::vector<double> lo;
    std::vector<double> hi;
};

struct ClipResult {
    EventTable table;
    ClipBounds bounds;
    std::size_t dropped = 0;
};

// Drops any event with a feature outside its [lo_pct, hi_pct] percentile band.
// Percentiles are computed per feature over the full table, signal and
// background combined, before any splitting.
ClipResult percentile_clip(const EventTable& table, double lo_pct = 5.0,
                           double hi_pct = 95.0);

struct SplitResult {
    EventTable train;
    EventTable test;
};

// Seeded stratified split; class balance is preserved within one event.
SplitResult split(const EventTable& table, double train_fraction, std::uint64_t seed);

// Population mean/std per feature; throws if any std falls below kMinFeatureStd.
NormalizationStats fit_normalizer(const EventTable& train_raw);

// x -> (x - mean) / std; flips the normalized tag.
EventTable apply_normalizer(const EventTable& table, const NormalizationStats& stats);

} // namespace lcf
