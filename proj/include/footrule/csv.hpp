#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "footrule/dataset.hpp"

namespace footrule {

class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t row, std::size_t col, const std::string& what)
        : std::runtime_error("csv row " + std::to_string(row) + ", column " +
                             std::to_string(col) + ": " + what),
          row(row), col(col) {}

    std::size_t row;   // 1-based, header = row 1
    std::size_t col;   // 1-based
};

/// Locale-independent decimal rendering, 17 significant digits (enough to
/// round-trip any double).
inline std::string format_double(double v, int significant = 17) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view token, std::size_t row, std::size_t col) {
    double value = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw CsvError(row, col, "not a number: '" + std::string(token) + "'");
    return value;
}

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

inline std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

} // namespace detail

inline void write_dataset_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
        if (j) out << ',';
        out << data.column_names()[j];
    }
    out << '\n';
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t j = 0; j < data.cols(); ++j) {
            if (j) out << ',';
            out << format_double(data.at(r, j));
        }
        out << '\n';
    }
}

/// Strict reader for the dataset format: one header line of names, then
/// uniform-width numeric rows. Errors carry 1-based row/column positions.
inline Dataset read_dataset_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError(1, 1, "empty input");
    auto header = detail::split_fields(detail::strip_cr(line));
    const std::size_t cols = header.size();
    if (cols < 2) throw CsvError(1, 1, "need at least two columns");
    std::vector<std::string> names(header.begin(), header.end());

    std::vector<double> values;
    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        auto stripped = detail::strip_cr(line);
        if (stripped.empty() && in.peek() == std::char_traits<char>::eof()) break;
        auto fields = detail::split_fields(stripped);
        if (fields.size() != cols)
            throw CsvError(row_number, 1,
                           "expected " + std::to_string(cols) + " fields, found " +
                               std::to_string(fields.size()));
        for (std::size_t j = 0; j < cols; ++j)
            values.push_back(parse_double(fields[j], row_number, j + 1));
    }
    const std::size_t rows = values.size() / cols;
    if (rows < 1) throw CsvError(row_number, 1, "no data rows");
    Dataset data(rows, cols, std::move(names));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < cols; ++j) data.at(r, j) = values[r * cols + j];
    if (!data.all_finite()) throw CsvError(2, 1, "non-finite value in data");
    return data;
}

inline Dataset read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError(1, 1, "cannot open '" + path + "'");
    return read_dataset_csv(in);
}

inline void write_dataset_csv_file(const std::string& path, const Dataset& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError(1, 1, "cannot open '" + path + "' for writing");
    write_dataset_csv(out, data);
}

} // namespace footrule
