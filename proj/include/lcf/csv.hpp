#pragma once

#include <string>

#include "lcf/event_table.hpp"

namespace lcf {

// Reads a comma-separated table with a header row. Every non-label column
// becomes a feature in file order. Missing or non-finite cells and non-binary
// labels are hard errors reporting the offending row.
EventTable load_csv(const std::string& path, const std::string& label_column = "label");

// Writes header (feature names + "label") and rows; floats with 17
// significant digits so a reload is bit-exact.
void save_csv(const EventTable& table, const std::string& path);

} // namespace lcf
