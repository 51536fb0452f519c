#include "lcf/event_table.hpp"

namespace lcf {

EventTable select_rows(const EventTable& table, std::span<const std::size_t> indices) {
    EventTable out;
    out.feature_names = table.feature_names;
    out.normalized = table.normalized;
    out.provenance = table.provenance;
    const std::size_t f = table.cols();
    out.values.resize(indices.size() * f);
    out.labels.resize(indices.size());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const std::size_t src = indices[r];
        for (std::size_t j = 0; j < f; ++j) out.values[r * f + j] = table.values[src * f + j];
        out.labels[r] = table.labels[src];
    }
    return out;
}

bool labels_binary(const EventTable& table) {
    for (auto y : table.labels)
        if (y != 0 && y != 1) return false;
    return true;
}

} // namespace lcf
