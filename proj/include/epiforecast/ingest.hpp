#pragma once

#include "epiforecast/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epiforecast::ingest {

/// One province (or whole-country) row of the JHU global confirmed feed.
struct CaseRow {
	std::optional<std::string> province;
	std::string country;
	std::vector<std::int64_t> counts;
};

struct RawCaseTable {
	std::vector<Date> dates;
	std::vector<CaseRow> rows;

	std::vector<std::string> countries() const;
};

/// Inclusive test window, e.g. {"6MAY-15MAY", 2020-05-06, 2020-05-15}.
struct IntervalSpec {
	std::string label;
	Date start;
	Date end;

	int length_days() const { return static_cast<int>((end - start).count()) + 1; }
};

/// The three evaluation windows of the benchmark protocol.
std::vector<IntervalSpec> default_intervals();

/// Accepts "LABEL:YYYY-MM-DD:YYYY-MM-DD" or "YYYY-MM-DD:YYYY-MM-DD" (label
/// derived from the dates).
IntervalSpec parse_interval(std::string_view text);

/// Parses a US-style JHU column header such as "1/22/20".
Date parse_jhu_date(std::string_view header);

/// Parses `time_series_covid19_confirmed_global.csv`. Header must be exactly
/// Province/State,Country/Region,Lat,Long followed by strictly increasing
/// daily m/d/yy columns.
RawCaseTable parse_jhu_csv(std::string_view payload);

/// Per-date sum over every row of `country`. Unknown names raise NotFound
/// with suggestions within edit distance 2.
TimeSeries aggregate_country(const RawCaseTable &table, std::string_view country);

/// Dates at which a cumulative series decreases (kept as-is by ingestion).
std::vector<Date> downward_revisions(const TimeSeries &series);

/// Ends at interval.end and starts at the first date with value >= 1.
TimeSeries slice_for_interval(const TimeSeries &series, const IntervalSpec &interval);

/// Series from the first date with value >= 1 to the end.
TimeSeries from_first_case(const TimeSeries &series);

std::size_t edit_distance(std::string_view a, std::string_view b);

/// Reads a local path or fetches an http(s) URL.
std::string load_source(const std::string &source);

/// Environment variable naming a local directory holding the JHU feed.
inline constexpr const char *kDataDirEnv = "EPIFORECAST_DATA_DIR";
inline constexpr const char *kJhuFileName = "time_series_covid19_confirmed_global.csv";
inline constexpr const char *kJhuUrl = "https://raw.githubusercontent.com/CSSEGISandData/COVID-19/master/"
                                       "csse_covid_19_data/csse_covid_19_time_series/"
                                       "time_series_covid19_confirmed_global.csv";

/// Resolves an empty or bare-file-name source against $EPIFORECAST_DATA_DIR,
/// falling back to `fallback`.
std::string resolve_source(const std::string &source, const std::string &fallback);

} // namespace epiforecast::ingest
