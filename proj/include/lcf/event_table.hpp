#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lcf {

// N x F event matrix with binary labels (1 = signal). Values are row-major;
// `normalized` tags whether the columns have been standardized already.
struct EventTable {
    std::vector<std::string> feature_names;
    std::vector<double> values; // rows() * cols(), row-major
    std::vector<std::uint8_t> labels;
    bool normalized = false;
    std::string provenance;

    std::size_t rows() const { return labels.size(); }
    std::size_t cols() const { return feature_names.size(); }

    double at(std::size_t i, std::size_t j) const { return values[i * cols() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * cols() + j]; }

    std::size_t count_label(std::uint8_t y) const {
        std::size_t n = 0;
        for (auto l : labels) n += (l == y);
        return n;
    }
};

// Gathers the given rows (in order) into a new table.
EventTable select_rows(const EventTable& table, std::span<const std::size_t> indices);

// True iff every label is 0 or 1.
bool labels_binary(const EventTable& table);

} // namespace lcf
