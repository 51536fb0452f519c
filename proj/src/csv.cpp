#include "lcf/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string_view>

namespace lcf {

namespace {

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.pop_back();
    std::size_t k = 0;
    while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
    return s.substr(k);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& what) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::runtime_error("row " + std::to_string(row) + ": cannot parse " + what +
                                 " '" + cell + "'");
    if (!std::isfinite(value))
        throw std::runtime_error("row " + std::to_string(row) + ": non-finite " + what);
    return value;
}

} // namespace

EventTable load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream file(path);
    if (!file.is_open()) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(file, line)) throw std::runtime_error(path + ": missing header");
    const auto header = split_line(line);

    std::size_t label_idx = header.size();
    EventTable table;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == label_column)
            label_idx = j;
        else
            table.feature_names.push_back(header[j]);
    }
    if (label_idx == header.size())
        throw std::runtime_error(path + ": no '" + label_column + "' column");

    const std::size_t f = table.feature_names.size();
    std::size_t row = 1; // header is row 0
    while (std::getline(file, line)) {
        if (line.empty() || line == "\r") {
            ++row;
            continue;
        }
        const auto cells = split_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("row " + std::to_string(row) + ": expected " +
                                     std::to_string(header.size()) + " cells, got " +
                                     std::to_string(cells.size()));
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j == label_idx) continue;
            if (cells[j].empty())
                throw std::runtime_error("row " + std::to_string(row) + ": missing value in column '" +
                                         header[j] + "'");
            table.values.push_back(parse_cell(cells[j], row, "value"));
        }
        const double y = parse_cell(cells[label_idx], row, "label");
        if (y != 0.0 && y != 1.0)
            throw std::runtime_error("row " + std::to_string(row) + ": label must be 0 or 1, got '" +
                                     cells[label_idx] + "'");
        table.labels.push_back(static_cast<std::uint8_t>(y));
        ++row;
    }
    if (table.values.size() != table.labels.size() * f)
        throw std::runtime_error(path + ": inconsistent row widths");
    table.provenance = "csv:" + path;
    return table;
}

void save_csv(const EventTable& table, const std::string& path) {
    std::ofstream file(path);
    if (!file.is_open()) throw std::runtime_error("cannot write " + path);

    std::string buf;
    buf.reserve(table.rows() * (table.cols() + 1) * 26);
    for (std::size_t j = 0; j < table.cols(); ++j) {
        buf += table.feature_names[j];
        buf += ',';
    }
    buf += "label\n";

    char cell[40];
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < table.cols(); ++j) {
            std::snprintf(cell, sizeof(cell), "%.17g", table.at(i, j));
            buf += cell;
            buf += ',';
        }
        buf += table.labels[i] ? '1' : '0';
        buf += '\n';
        if (buf.size() > (1u << 20)) {
            file << buf;
            buf.clear();
        }
    }
    file << buf;
    if (!file.good()) throw std::runtime_error("write failed for " + path);
}

} // namespace lcf
