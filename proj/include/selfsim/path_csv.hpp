#pragma once

#include <charconv>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "selfsim/path.hpp"

namespace selfsim {

namespace detail {

inline double parse_double(const std::string& field) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    while (first < last && *first == ' ') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw MalformedInput("csv: bad numeric field '" + field + "'");
    return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

// Format: header "t,x1,...,xd", one row per sample, full double precision.
inline void write_path_csv(std::ostream& os, const Path& path) {
    os << "t";
    for (std::size_t j = 1; j <= path.dimension(); ++j) os << ",x" << j;
    os << "\n";
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < path.size(); ++i) {
        os << path.time(i);
        for (std::size_t j = 0; j < path.dimension(); ++j)
            os << "," << path.values()(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j));
        os << "\n";
    }
}

inline Path read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw MalformedInput("path csv: empty input");
    const auto header = detail::split_csv_line(line);
    if (header.empty() || header[0] != "t")
        throw MalformedInput("path csv: header must start with 't'");
    const std::size_t d = header.size() - 1;
    if (d < 1) throw MalformedInput("path csv: no coordinate columns");
    for (std::size_t j = 1; j < header.size(); ++j) {
        if (header[j] != "x" + std::to_string(j))
            throw MalformedInput("path csv: unexpected column '" + header[j] + "'");
    }
    std::vector<double> times;
    std::vector<double> flat;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != d + 1)
            throw MalformedInput("path csv: row has wrong field count");
        times.push_back(detail::parse_double(fields[0]));
        for (std::size_t j = 1; j <= d; ++j) flat.push_back(detail::parse_double(fields[j]));
    }
    if (times.empty()) throw MalformedInput("path csv: no data rows");
    Eigen::MatrixXd values(static_cast<Eigen::Index>(times.size()),
                           static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < times.size(); ++i)
        for (std::size_t j = 0; j < d; ++j)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                flat[i * d + j];
    return Path(TimeGrid(std::move(times)), std::move(values));
}

}  // namespace selfsim
