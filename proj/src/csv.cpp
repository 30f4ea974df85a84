#include "gmfdfa/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "gmfdfa/errors.hpp"

namespace gmfdfa {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return cells;
}

std::optional<double> parse_double(const std::string& cell) {
    const std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

bool is_index(const std::string& column) {
    if (column.empty()) return false;
    for (const char c : column) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}

TimeSeries ingest_csv(const std::string& path, const CsvSpec& spec) {
    std::ifstream in(path);
    if (!in) {
        throw FileNotFound("cannot open " + path);
    }

    const bool by_index = is_index(spec.column);
    if (!by_index && spec.header == HeaderMode::no) {
        throw ConfigError("column selected by name ('" + spec.column +
                          "') requires a header row");
    }

    std::size_t column_index = by_index ? std::stoul(spec.column) : 0;
    bool header_resolved = by_index && spec.header == HeaderMode::no;
    bool skip_first_data_check = by_index && spec.header == HeaderMode::yes;

    std::vector<double> values;
    std::string line;
    std::size_t line_number = 0;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line, spec.delimiter);

        if (first_content_row) {
            first_content_row = false;
            if (!by_index) {
                bool found = false;
                for (std::size_t i = 0; i < cells.size(); ++i) {
                    if (trim(cells[i]) == spec.column) {
                        column_index = i;
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    throw ParseError(line_number, spec.column, "no such column in header");
                }
                header_resolved = true;
                continue;
            }
            if (skip_first_data_check) {
                continue;
            }
            if (!header_resolved) {
                // HeaderMode::automatic with an index: a first row whose
                // selected cell is not numeric is treated as the header.
                header_resolved = true;
                if (column_index < cells.size() && !parse_double(cells[column_index])) {
                    continue;
                }
            }
        }

        if (column_index >= cells.size()) {
            throw ParseError(line_number, spec.column,
                             "row has only " + std::to_string(cells.size()) + " columns");
        }
        const std::optional<double> value = parse_double(cells[column_index]);
        if (!value) {
            throw ParseError(line_number, spec.column,
                             "cell '" + trim(cells[column_index]) + "' is not a finite number");
        }
        values.push_back(*value);
    }

    if (values.empty()) {
        throw EmptySeries("no data rows in " + path);
    }
    return TimeSeries(std::move(values), TransformKind::raw, path);
}

void write_series_csv(const std::string& path, const TimeSeries& x) {
    std::ofstream out(path);
    if (!out) {
        throw IOError("cannot write " + path);
    }
    out << "value\n";
    char buffer[40];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buffer, sizeof(buffer), "%.17g", x[i]);
        out << buffer << "\n";
    }
    if (!out) {
        throw IOError("failed while writing " + path);
    }
}

}
