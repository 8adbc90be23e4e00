#pragma once

// Readers and writers for the three CSV schemas the pipeline consumes:
// deviation series (t,delta_f / t,delta_p), wing traces (t,u,v) and
// regression histories (c1,c2,c3,c4,count).

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "openpath/balance.hpp"
#include "openpath/errors.hpp"
#include "openpath/resonance.hpp"
#include "openpath/spectra.hpp"

namespace openpath {
namespace csv {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, sep)) out.push_back(trim(field));
    if (!line.empty() && line.back() == sep) out.push_back("");
    return out;
}

inline double parse_number(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        raise(errc::config_error, "bad numeric field '" + s + "' in " + where);
    }
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        raise(errc::config_error, "cannot open '" + path + "'");
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (!t.empty()) lines.push_back(t);
    }
    return lines;
}

} // namespace detail

// Deviation series: header t,delta_f or t,delta_p; t must run 1..T.
inline DeviationSeries read_series(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty()) {
        raise(errc::config_error, "empty series file '" + path + "'");
    }
    const std::string header = lines.front();
    if (header != "t,delta_f" && header != "t,delta_p") {
        raise(errc::config_error,
              "series file '" + path + "' must start with t,delta_f or t,delta_p");
    }
    std::vector<double> values;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = detail::split(lines[i], ',');
        if (fields.size() != 2) {
            raise(errc::config_error, "series row needs two fields in " + path);
        }
        const double t = detail::parse_number(fields[0], path);
        if (t != static_cast<double>(i)) {
            raise(errc::config_error,
                  "series time column must run 1..T in " + path);
        }
        values.push_back(detail::parse_number(fields[1], path));
    }
    if (values.size() < 2) {
        raise(errc::config_error, "series in '" + path + "' needs T >= 2");
    }
    return DeviationSeries(std::move(values));
}

inline void write_series(const std::string& path, const char* header_value,
                         const std::vector<double>& values) {
    std::ofstream out(path);
    if (!out) {
        raise(errc::config_error, "cannot write '" + path + "'");
    }
    out << "t," << header_value << "\n";
    out.precision(17);
    for (std::size_t t = 1; t <= values.size(); ++t) {
        out << t << "," << values[t - 1] << "\n";
    }
}

// Wing trace: header t,u,v.
inline WingTrace read_wing(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines.front() != "t,u,v") {
        raise(errc::config_error, "wing file '" + path + "' must start with t,u,v");
    }
    WingTrace wing;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = detail::split(lines[i], ',');
        if (fields.size() != 3) {
            raise(errc::config_error, "wing row needs three fields in " + path);
        }
        detail::parse_number(fields[0], path);
        wing.u.push_back(detail::parse_number(fields[1], path));
        wing.v.push_back(detail::parse_number(fields[2], path));
    }
    if (wing.size() == 0) {
        raise(errc::config_error, "wing file '" + path + "' has no rows");
    }
    return wing;
}

// Regression history: header c1,c2,c3,c4,count; counts must be nonnegative
// integers.
inline std::vector<HistoryRow> read_history(const std::string& path) {
    const auto lines = detail::read_lines(path);
    if (lines.empty() || lines.front() != "c1,c2,c3,c4,count") {
        raise(errc::config_error,
              "history file '" + path + "' must start with c1,c2,c3,c4,count");
    }
    std::vector<HistoryRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = detail::split(lines[i], ',');
        if (fields.size() != 5) {
            raise(errc::config_error, "history row needs five fields in " + path);
        }
        HistoryRow row{};
        for (int j = 0; j < 4; ++j) {
            row.c[j] = detail::parse_number(fields[j], path);
        }
        row.count = detail::parse_number(fields[4], path);
        if (row.count < 0.0 || row.count != std::floor(row.count)) {
            raise(errc::config_error,
                  "history count must be a nonnegative integer in " + path);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace csv
} // namespace openpath
