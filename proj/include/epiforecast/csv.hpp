#pragma once

#include "epiforecast/series.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace epiforecast::csv {

using Row = std::vector<std::string>;

/// RFC-4180 reader: quoted fields may contain commas, quotes ("") and line
/// breaks. Accepts LF or CRLF record terminators.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote or line break.
std::string quote(std::string_view field);
void write_row(std::ostream &out, const Row &row);

/// Shortest decimal that round-trips to the same double.
std::string format_real(double value);

/// Canonical series file: header `date,value`, one ISO-dated row per day.
void write_series(std::ostream &out, const TimeSeries &series);
TimeSeries read_series(std::string_view text, std::string name);

std::string read_file(const std::string &path);
/// Writes atomically enough for our purposes: temp file then rename.
void write_file(const std::string &path, std::string_view contents);

} // namespace epiforecast::csv
