#include "epiforecast/ingest.hpp"

#include "epiforecast/csv.hpp"

#include <curl/curl.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <map>

namespace epiforecast::ingest {

namespace {

constexpr const char *kHeader[] = {"Province/State", "Country/Region", "Lat", "Long"};

std::string month_abbrev(unsigned month) {
	static constexpr const char *names[] = {"JAN", "FEB", "MAR", "APR", "MAY", "JUN",
	                                        "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"};
	return names[month - 1];
}

std::string interval_label(Date start, Date end) {
	const std::chrono::year_month_day a{start}, b{end};
	return std::to_string(unsigned(a.day())) + month_abbrev(unsigned(a.month())) + "-" +
	       std::to_string(unsigned(b.day())) + month_abbrev(unsigned(b.month()));
}

std::string lower(std::string_view s) {
	std::string out(s);
	std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return char(std::tolower(c)); });
	return out;
}

std::size_t write_body(char *data, std::size_t size, std::size_t count, void *user) {
	static_cast<std::string *>(user)->append(data, size * count);
	return size * count;
}

} // namespace

std::vector<std::string> RawCaseTable::countries() const {
	std::vector<std::string> out;
	for (const auto &row : rows) {
		if (std::find(out.begin(), out.end(), row.country) == out.end()) {
			out.push_back(row.country);
		}
	}
	return out;
}

std::vector<IntervalSpec> default_intervals() {
	return {
	    {"6MAY-15MAY", make_date(2020, 5, 6), make_date(2020, 5, 15)},
	    {"21JUL-30JUL", make_date(2020, 7, 21), make_date(2020, 7, 30)},
	    {"1AUG-10AUG", make_date(2020, 8, 1), make_date(2020, 8, 10)},
	};
}

IntervalSpec parse_interval(std::string_view text) {
	std::vector<std::string> parts;
	std::size_t begin = 0;
	while (true) {
		const auto pos = text.find(':', begin);
		parts.emplace_back(text.substr(begin, pos == std::string_view::npos ? std::string_view::npos : pos - begin));
		if (pos == std::string_view::npos) {
			break;
		}
		begin = pos + 1;
	}
	if (parts.size() != 2 && parts.size() != 3) {
		throw Error(ErrorKind::InvalidArgument, "interval '" + std::string(text) + "' is not [LABEL:]START:END");
	}
	const std::size_t off = parts.size() - 2;
	IntervalSpec spec{"", parse_iso_date(parts[off]), parse_iso_date(parts[off + 1])};
	if (spec.end < spec.start) {
		throw Error(ErrorKind::InvalidArgument, "interval '" + std::string(text) + "' ends before it starts");
	}
	spec.label = off ? parts[0] : interval_label(spec.start, spec.end);
	return spec;
}

Date parse_jhu_date(std::string_view header) {
	unsigned vals[3] = {0, 0, 0};
	std::size_t part = 0;
	const char *p = header.data();
	const char *end = header.data() + header.size();
	while (part < 3) {
		const auto res = std::from_chars(p, end, vals[part]);
		if (res.ec != std::errc{} || res.ptr == p) {
			throw Error(ErrorKind::FormatError, "date column header '" + std::string(header) + "' is not m/d/yy");
		}
		p = res.ptr;
		++part;
		if (part < 3) {
			if (p == end || *p != '/') {
				throw Error(ErrorKind::FormatError, "date column header '" + std::string(header) + "' is not m/d/yy");
			}
			++p;
		}
	}
	if (p != end || vals[2] > 99) {
		throw Error(ErrorKind::FormatError, "date column header '" + std::string(header) + "' is not m/d/yy");
	}
	return make_date(2000 + int(vals[2]), vals[0], vals[1]);
}

RawCaseTable parse_jhu_csv(std::string_view payload) {
	if (payload.size() >= 3 && payload.substr(0, 3) == "\xEF\xBB\xBF") {
		payload.remove_prefix(3);
	}
	const auto rows = csv::parse(payload);
	if (rows.empty() || rows[0].size() < 5) {
		throw Error(ErrorKind::FormatError, "missing JHU header (Province/State,Country/Region,Lat,Long,<dates>)");
	}
	const auto &header = rows[0];
	for (std::size_t i = 0; i < 4; ++i) {
		if (header[i] != kHeader[i]) {
			throw Error(ErrorKind::FormatError, "header column " + std::to_string(i + 1) + " is '" + header[i] +
			                                        "', expected '" + kHeader[i] + "'");
		}
	}
	RawCaseTable table;
	for (std::size_t c = 4; c < header.size(); ++c) {
		const Date d = parse_jhu_date(header[c]);
		if (!table.dates.empty() && d != table.dates.back() + std::chrono::days(1)) {
			throw Error(ErrorKind::FormatError, "date columns are not consecutive increasing days at '" + header[c] + "'");
		}
		table.dates.push_back(d);
	}
	for (std::size_t r = 1; r < rows.size(); ++r) {
		const auto &fields = rows[r];
		if (fields.size() == 1 && fields[0].empty()) {
			continue;
		}
		if (fields.size() != header.size()) {
			throw Error(ErrorKind::FormatError, "row " + std::to_string(r + 1) + " has " + std::to_string(fields.size()) +
			                                        " fields, header has " + std::to_string(header.size()));
		}
		CaseRow row;
		if (!fields[0].empty()) {
			row.province = fields[0];
		}
		row.country = fields[1];
		row.counts.reserve(table.dates.size());
		for (std::size_t c = 4; c < fields.size(); ++c) {
			const auto &cell = fields[c];
			std::int64_t v = 0;
			const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
			if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || v < 0) {
				throw Error(ErrorKind::CellError, "row " + std::to_string(r + 1) + " (" + row.country + "), column " +
				                                      std::to_string(c + 1) + " (" + header[c] + "): '" + cell +
				                                      "' is not a non-negative integer");
			}
			row.counts.push_back(v);
		}
		table.rows.push_back(std::move(row));
	}
	return table;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
	std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
	for (std::size_t j = 0; j <= b.size(); ++j) {
		prev[j] = j;
	}
	for (std::size_t i = 1; i <= a.size(); ++i) {
		cur[0] = i;
		for (std::size_t j = 1; j <= b.size(); ++j) {
			const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
			cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
		}
		std::swap(prev, cur);
	}
	return prev[b.size()];
}

TimeSeries aggregate_country(const RawCaseTable &table, std::string_view country) {
	Eigen::VectorXd sum = Eigen::VectorXd::Zero(Eigen::Index(table.dates.size()));
	bool found = false;
	for (const auto &row : table.rows) {
		if (row.country != country) {
			continue;
		}
		found = true;
		for (std::size_t i = 0; i < row.counts.size(); ++i) {
			sum[Eigen::Index(i)] += static_cast<double>(row.counts[i]);
		}
	}
	if (!found) {
		std::string msg = "country '" + std::string(country) + "' not in table";
		std::vector<std::string> near;
		const std::string want = lower(country);
		for (const auto &name : table.countries()) {
			if (edit_distance(want, lower(name)) <= 2) {
				near.push_back(name);
			}
		}
		if (!near.empty()) {
			msg += "; did you mean ";
			for (std::size_t i = 0; i < near.size(); ++i) {
				msg += (i ? ", '" : "'") + near[i] + "'";
			}
			msg += "?";
		}
		throw Error(ErrorKind::NotFound, msg);
	}
	if (table.dates.empty()) {
		throw Error(ErrorKind::EmptyInput, "table has no date columns");
	}
	return TimeSeries(std::string(country), table.dates.front(), std::move(sum));
}

std::vector<Date> downward_revisions(const TimeSeries &series) {
	std::vector<Date> out;
	for (Eigen::Index i = 1; i < series.size(); ++i) {
		if (series[i] < series[i - 1]) {
			out.push_back(series.date(i));
		}
	}
	return out;
}

TimeSeries from_first_case(const TimeSeries &series) {
	for (Eigen::Index i = 0; i < series.size(); ++i) {
		if (series[i] >= 1.0) {
			return series.slice(i, series.size() - i);
		}
	}
	throw Error(ErrorKind::InsufficientData, "series '" + series.name() + "' never reaches one case");
}

TimeSeries slice_for_interval(const TimeSeries &series, const IntervalSpec &interval) {
	const auto last = series.index_of(interval.end);
	if (!last) {
		throw Error(ErrorKind::OutOfRange, "interval " + interval.label + " ends " + format_iso_date(interval.end) +
		                                       ", outside the data range " + format_iso_date(series.start()) + " to " +
		                                       format_iso_date(series.end()));
	}
	return from_first_case(series.slice(0, *last + 1));
}

std::string load_source(const std::string &source) {
	if (source.rfind("http://", 0) != 0 && source.rfind("https://", 0) != 0) {
		return csv::read_file(source);
	}
	CURL *curl = curl_easy_init();
	if (!curl) {
		throw Error(ErrorKind::IoError, "cannot initialise HTTP client");
	}
	std::string body;
	curl_easy_setopt(curl, CURLOPT_URL, source.c_str());
	curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
	curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
	curl_easy_setopt(curl, CURLOPT_CONNECTTIMEOUT, 30L);
	curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, write_body);
	curl_easy_setopt(curl, CURLOPT_WRITEDATA, &body);
	const CURLcode rc = curl_easy_perform(curl);
	curl_easy_cleanup(curl);
	if (rc != CURLE_OK) {
		throw Error(ErrorKind::IoError, "fetching '" + source + "' failed: " + curl_easy_strerror(rc));
	}
	return body;
}

std::string resolve_source(const std::string &source, const std::string &fallback) {
	namespace fs = std::filesystem;
	const char *dir = std::getenv(kDataDirEnv);
	if (source.empty()) {
		if (dir && *dir) {
			return (fs::path(dir) / kJhuFileName).string();
		}
		return fallback;
	}
	if (dir && *dir && source.find('/') == std::string::npos && !fs::exists(source)) {
		return (fs::path(dir) / source).string();
	}
	return source;
}

} // namespace epiforecast::ingest
