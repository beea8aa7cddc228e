#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "futopt/domain.hpp"
#include "futopt/errors.hpp"

namespace futopt {

/// Days since the civil epoch 1970-01-01 (Howard Hinnant's algorithm).
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

/// Parse an ISO-8601 date "YYYY-MM-DD" to a serial day number.
inline std::optional<std::int64_t> parse_iso_date(const std::string& s) {
    int y;
    unsigned m, d;
    if (std::sscanf(s.c_str(), "%d-%u-%u", &y, &m, &d) != 3) return std::nullopt;
    if (m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    return days_from_civil(y, m, d);
}

inline std::string format_iso_date(std::int64_t serial) {
    int y;
    unsigned m, d;
    civil_from_days(serial, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
    return buf;
}

/// Header names of the two columns to read.
struct CsvSchema {
    std::string date_column = "date";
    std::string price_column = "settle";
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
            cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace detail

/// Read a settlement-price CSV (header row, ISO dates) into a
/// PriceSeries in chronological order. The time step is the median
/// date spacing in years unless step_override is given; a median gap
/// of one calendar day is treated as business-daily data (1/252).
inline PriceSeries ingest_csv(const std::string& path, const CsvSchema& schema = {},
                              std::optional<double> step_override = std::nullopt) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile("no header row in " + path);

    const auto header = detail::split_csv_line(line);
    std::size_t date_idx = header.size(), price_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == schema.date_column) date_idx = i;
        if (header[i] == schema.price_column) price_idx = i;
    }
    if (date_idx == header.size() || price_idx == header.size())
        throw ParseError(1, "missing column '" + schema.date_column + "' or '" +
                                schema.price_column + "'");

    std::vector<std::int64_t> dates;
    std::vector<double> prices;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv_line(line);
        if (cells.size() <= std::max(date_idx, price_idx))
            throw ParseError(line_no, "too few columns");
        const auto date = parse_iso_date(cells[date_idx]);
        if (!date) throw ParseError(line_no, "bad date '" + cells[date_idx] + "'");
        const std::string& cell = cells[price_idx];
        if (cell.empty()) throw ParseError(line_no, "missing price");
        double value;
        const auto [end, ec] =
            std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc() || end != cell.data() + cell.size())
            throw ParseError(line_no, "bad price '" + cell + "'");
        dates.push_back(*date);
        prices.push_back(value);
    }
    if (prices.empty()) throw EmptyFile("no data rows in " + path);

    for (std::size_t i = 1; i < dates.size(); ++i)
        if (dates[i] <= dates[i - 1])
            throw NonMonotoneDates("dates not strictly increasing at row " +
                                   std::to_string(i + 1));

    double step;
    if (step_override) {
        step = *step_override;
    } else {
        std::vector<std::int64_t> gaps;
        gaps.reserve(dates.size() - 1);
        for (std::size_t i = 1; i < dates.size(); ++i)
            gaps.push_back(dates[i] - dates[i - 1]);
        std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
        const std::int64_t median_gap = gaps[gaps.size() / 2];
        step = (median_gap == 1) ? 1.0 / 252.0
                                 : static_cast<double>(median_gap) / 365.25;
    }
    return PriceSeries(std::move(prices), step, path);
}

/// Write a series as `date,settle` with synthetic consecutive dates and
/// full round-trip precision.
inline void write_series_csv(const PriceSeries& series, const std::string& path,
                             std::int64_t start_serial = days_from_civil(2020, 1, 1)) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "date,settle\n";
    char buf[32];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", series.values()[i]);
        out << format_iso_date(start_serial + static_cast<std::int64_t>(i)) << ','
            << buf << '\n';
    }
}

}  // namespace futopt
