#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace modalshift {

/// Fixed numeric format for every CSV we write: shortest of %.6g, with NaN
/// normalised to "nan" so output is identical across libc flavours.
inline std::string format_double(double value) {
    if (std::isnan(value))
        return "nan";
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

inline std::string join_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0)
            row += ',';
        row += cells[i];
    }
    return row;
}

/// Splits one line on commas. None of our formats quote or escape, so a
/// plain split is the whole grammar.
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

/// Reads a whole CSV stream into rows of cells. Skips a trailing empty
/// line; carriage returns are stripped so CRLF files parse the same way.
inline std::vector<std::vector<std::string>> read_csv(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof())
            break;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

inline double parse_double(const std::string& cell) {
    try {
        std::size_t used = 0;
        const double value = std::stod(cell, &used);
        if (used != cell.size())
            throw std::invalid_argument(cell);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("not a number: '" + cell + "'");
    }
}

} // namespace modalshift
