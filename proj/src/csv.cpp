#include "epiforecast/csv.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace epiforecast::csv {

std::vector<Row> parse(std::string_view text) {
	std::vector<Row> rows;
	Row row;
	std::string field;
	bool in_quotes = false;
	bool field_started = false;
	std::size_t i = 0;
	auto end_field = [&] {
		row.push_back(std::move(field));
		field.clear();
		field_started = false;
	};
	auto end_row = [&] {
		end_field();
		rows.push_back(std::move(row));
		row.clear();
	};
	while (i < text.size()) {
		const char c = text[i];
		if (in_quotes) {
			if (c == '"') {
				if (i + 1 < text.size() && text[i + 1] == '"') {
					field.push_back('"');
					i += 2;
					continue;
				}
				in_quotes = false;
			} else {
				field.push_back(c);
			}
			++i;
			continue;
		}
		if (c == '"' && !field_started && field.empty()) {
			in_quotes = true;
			field_started = true;
		} else if (c == ',') {
			end_field();
		} else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
			end_row();
			++i;
		} else if (c == '\n') {
			end_row();
		} else {
			field.push_back(c);
			field_started = true;
		}
		++i;
	}
	if (in_quotes) {
		throw Error(ErrorKind::FormatError, "unterminated quoted field at end of input");
	}
	if (field_started || !field.empty() || !row.empty()) {
		end_row();
	}
	return rows;
}

std::string quote(std::string_view field) {
	if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
		return std::string(field);
	}
	std::string out = "\"";
	for (const char c : field) {
		if (c == '"') {
			out += "\"\"";
		} else {
			out.push_back(c);
		}
	}
	out.push_back('"');
	return out;
}

void write_row(std::ostream &out, const Row &row) {
	for (std::size_t i = 0; i < row.size(); ++i) {
		if (i) {
			out << ',';
		}
		out << quote(row[i]);
	}
	out << '\n';
}

std::string format_real(double value) {
	if (std::isnan(value)) {
		return "nan";
	}
	char buf[64];
	const auto res = std::to_chars(buf, buf + sizeof buf, value);
	return std::string(buf, res.ptr);
}

void write_series(std::ostream &out, const TimeSeries &series) {
	write_row(out, {"date", "value"});
	for (Eigen::Index i = 0; i < series.size(); ++i) {
		write_row(out, {format_iso_date(series.date(i)), format_real(series[i])});
	}
}

TimeSeries read_series(std::string_view text, std::string name) {
	const auto rows = parse(text);
	if (rows.empty() || rows[0].size() != 2 || rows[0][0] != "date" || rows[0][1] != "value") {
		throw Error(ErrorKind::FormatError, "expected header 'date,value'");
	}
	std::vector<Date> dates;
	std::vector<double> values;
	for (std::size_t r = 1; r < rows.size(); ++r) {
		if (rows[r].size() == 1 && rows[r][0].empty()) {
			continue;
		}
		if (rows[r].size() != 2) {
			throw Error(ErrorKind::FormatError, "row " + std::to_string(r + 1) + " does not have 2 fields");
		}
		dates.push_back(parse_iso_date(rows[r][0]));
		double v = 0.0;
		const auto &cell = rows[r][1];
		const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
		if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
			throw Error(ErrorKind::CellError, "row " + std::to_string(r + 1) + ": '" + cell + "' is not a number");
		}
		values.push_back(v);
	}
	if (values.empty()) {
		throw Error(ErrorKind::EmptyInput, "series file has no data rows");
	}
	return TimeSeries(std::move(name), dates, Eigen::Map<Eigen::VectorXd>(values.data(), Eigen::Index(values.size())));
}

std::string read_file(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in) {
		throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
	}
	std::ostringstream ss;
	ss << in.rdbuf();
	if (in.bad()) {
		throw Error(ErrorKind::IoError, "failed reading '" + path + "'");
	}
	return ss.str();
}

void write_file(const std::string &path, std::string_view contents) {
	namespace fs = std::filesystem;
	const fs::path target(path);
	if (target.has_parent_path()) {
		std::error_code ec;
		fs::create_directories(target.parent_path(), ec);
		if (ec) {
			throw Error(ErrorKind::IoError, "cannot create directory '" + target.parent_path().string() + "'");
		}
	}
	const fs::path tmp = target.string() + ".tmp";
	{
		std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
		if (!out) {
			throw Error(ErrorKind::IoError, "cannot write '" + tmp.string() + "'");
		}
		out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
		if (!out) {
			throw Error(ErrorKind::IoError, "failed writing '" + tmp.string() + "'");
		}
	}
	std::error_code ec;
	fs::rename(tmp, target, ec);
	if (ec) {
		throw Error(ErrorKind::IoError, "cannot move output into '" + path + "'");
	}
}

} // namespace epiforecast::csv
