#include "epiforecast/plot.hpp"

#include "epiforecast/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace epiforecast::plot {

namespace {

const char *const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

double parse_real(const std::string &cell, std::size_t row, std::string_view column) {
	double value = 0.0;
	const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
	if (ec != std::errc() || ptr != cell.data() + cell.size()) {
		throw Error(ErrorKind::FormatError, "row " + std::to_string(row) + ", column " + std::string(column) +
		                                        ": '" + cell + "' is not a number");
	}
	return value;
}

std::string num(double v) {
	std::ostringstream s;
	s.precision(2);
	s << std::fixed << v;
	return s.str();
}

std::string tick_label(double v) {
	std::ostringstream s;
	if (std::abs(v) >= 1e6) {
		s.precision(2);
		s << std::fixed << v / 1e6 << "M";
	} else if (std::abs(v) >= 1e3) {
		s.precision(1);
		s << std::fixed << v / 1e3 << "k";
	} else {
		s.precision(0);
		s << std::fixed << v;
	}
	return s.str();
}

} // namespace

std::string xml_escape(std::string_view text) {
	std::string out;
	for (const char c : text) {
		switch (c) {
		case '&': out += "&amp;"; break;
		case '<': out += "&lt;"; break;
		case '>': out += "&gt;"; break;
		case '"': out += "&quot;"; break;
		case '\'': out += "&apos;"; break;
		default: out += c;
		}
	}
	return out;
}

Line read_forecast_csv(std::string_view text, std::string label) {
	const auto rows = csv::parse(text);
	if (rows.empty()) {
		throw Error(ErrorKind::FormatError, "forecast file for '" + label + "' is empty");
	}
	const csv::Row &header = rows.front();
	const csv::Row plain{"date", "point", "lower90", "upper90"};
	const csv::Row with_actual{"date", "actual", "point", "lower90", "upper90"};
	std::size_t offset = 0;
	if (header == with_actual) {
		offset = 1;
	} else if (header != plain) {
		throw Error(ErrorKind::FormatError, "forecast file for '" + label +
		                                        "' must have header date,point,lower90,upper90 "
		                                        "(optionally with actual after date)");
	}
	if (rows.size() < 2) {
		throw Error(ErrorKind::FormatError, "forecast file for '" + label + "' has no rows");
	}
	Line line{std::move(label), {}, Eigen::VectorXd(Eigen::Index(rows.size() - 1)),
	          Eigen::VectorXd(Eigen::Index(rows.size() - 1)), Eigen::VectorXd(Eigen::Index(rows.size() - 1))};
	for (std::size_t r = 1; r < rows.size(); ++r) {
		const auto &row = rows[r];
		if (row.size() != header.size()) {
			throw Error(ErrorKind::FormatError, "row " + std::to_string(r) + " has " + std::to_string(row.size()) +
			                                        " fields, expected " + std::to_string(header.size()));
		}
		line.dates.push_back(parse_iso_date(row[0]));
		const Eigen::Index i = Eigen::Index(r - 1);
		line.values[i] = parse_real(row[1 + offset], r, "point");
		line.lower[i] = parse_real(row[2 + offset], r, "lower90");
		line.upper[i] = parse_real(row[3 + offset], r, "upper90");
	}
	return line;
}

Line read_actuals_csv(std::string_view text, std::string label) {
	const TimeSeries s = csv::read_series(text, label);
	return Line{std::move(label), s.dates(), s.values(), {}, {}};
}

std::string render_svg(const Line &actual, const std::vector<Line> &forecasts, const PlotOptions &options) {
	if (options.band && *options.band >= forecasts.size()) {
		throw Error(ErrorKind::InvalidArgument, "band index is out of range");
	}
	std::vector<const Line *> lines{&actual};
	for (const auto &f : forecasts) {
		lines.push_back(&f);
	}
	for (const Line *l : lines) {
		if (l->dates.empty() || Eigen::Index(l->dates.size()) != l->values.size()) {
			throw Error(ErrorKind::ShapeError, "line '" + l->label + "' has no points or mismatched lengths");
		}
	}

	double x_min = std::numeric_limits<double>::infinity();
	double x_max = -x_min;
	double y_min = x_min;
	double y_max = -x_min;
	auto extend = [&](const Line &l, bool with_band) {
		for (std::size_t i = 0; i < l.dates.size(); ++i) {
			const double x = double(l.dates[i].time_since_epoch().count());
			x_min = std::min(x_min, x);
			x_max = std::max(x_max, x);
			y_min = std::min(y_min, l.values[Eigen::Index(i)]);
			y_max = std::max(y_max, l.values[Eigen::Index(i)]);
			if (with_band && l.lower.size() == l.values.size()) {
				y_min = std::min(y_min, l.lower[Eigen::Index(i)]);
				y_max = std::max(y_max, l.upper[Eigen::Index(i)]);
			}
		}
	};
	for (std::size_t i = 0; i < lines.size(); ++i) {
		extend(*lines[i], options.band && i == *options.band + 1);
	}
	if (x_max == x_min) {
		x_max += 1.0;
	}
	if (y_max == y_min) {
		y_max += 1.0;
	}
	const double pad = 0.05 * (y_max - y_min);
	y_min -= pad;
	y_max += pad;

	const double left = 80, right = 20, top = 40, bottom = 60;
	const double plot_w = options.width - left - right;
	const double plot_h = options.height - top - bottom;
	auto sx = [&](Date d) { return left + (double(d.time_since_epoch().count()) - x_min) / (x_max - x_min) * plot_w; };
	auto sy = [&](double v) { return top + (y_max - v) / (y_max - y_min) * plot_h; };

	std::ostringstream svg;
	svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
	svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
	    << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
	svg << "<rect x=\"0\" y=\"0\" width=\"" << options.width << "\" height=\"" << options.height << "\" fill=\"white\"/>\n";
	svg << "<text x=\"" << num(options.width / 2.0) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
	    << xml_escape(options.title) << "</text>\n";

	// Axes and ticks.
	svg << "<g stroke=\"#444\" stroke-width=\"1\">\n";
	svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
	    << top + plot_h << "\"/>\n";
	svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h << "\"/>\n";
	svg << "</g>\n<g fill=\"#222\">\n";
	const int x_ticks = 6;
	for (int k = 0; k <= x_ticks; ++k) {
		const double day = std::round(x_min + (x_max - x_min) * k / x_ticks);
		const Date d{std::chrono::days(static_cast<long>(day))};
		const double x = sx(d);
		svg << "<line x1=\"" << num(x) << "\" y1=\"" << top + plot_h << "\" x2=\"" << num(x) << "\" y2=\""
		    << top + plot_h + 5 << "\" stroke=\"#444\"/>\n";
		svg << "<text x=\"" << num(x) << "\" y=\"" << top + plot_h + 20 << "\" text-anchor=\"middle\">"
		    << format_iso_date(d) << "</text>\n";
	}
	const int y_ticks = 5;
	for (int k = 0; k <= y_ticks; ++k) {
		const double v = y_min + (y_max - y_min) * k / y_ticks;
		svg << "<text x=\"" << left - 8 << "\" y=\"" << num(sy(v) + 4) << "\" text-anchor=\"end\">" << tick_label(v)
		    << "</text>\n";
	}
	svg << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << options.height - 12
	    << "\" text-anchor=\"middle\">date</text>\n";
	svg << "</g>\n";

	if (options.band) {
		const Line &b = forecasts[*options.band];
		if (b.lower.size() == b.values.size()) {
			svg << "<polygon fill=\"" << kPalette[(*options.band + 1) % std::size(kPalette)]
			    << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
			for (std::size_t i = 0; i < b.dates.size(); ++i) {
				svg << num(sx(b.dates[i])) << ',' << num(sy(b.upper[Eigen::Index(i)])) << ' ';
			}
			for (std::size_t i = b.dates.size(); i-- > 0;) {
				svg << num(sx(b.dates[i])) << ',' << num(sy(b.lower[Eigen::Index(i)])) << (i ? " " : "");
			}
			svg << "\"/>\n";
		}
	}

	for (std::size_t li = 0; li < lines.size(); ++li) {
		const Line &l = *lines[li];
		svg << "<polyline fill=\"none\" stroke=\"" << kPalette[li % std::size(kPalette)] << "\" stroke-width=\""
		    << (li == 0 ? "2.5" : "1.8") << "\"" << (li == 0 ? "" : " stroke-dasharray=\"6 3\"") << " points=\"";
		for (std::size_t i = 0; i < l.dates.size(); ++i) {
			svg << (i ? " " : "") << num(sx(l.dates[i])) << ',' << num(sy(l.values[Eigen::Index(i)]));
		}
		svg << "\"/>\n";
	}

	svg << "<g font-size=\"12\">\n";
	for (std::size_t li = 0; li < lines.size(); ++li) {
		const double y = top + 14 + 18.0 * double(li);
		const double x = left + 14;
		svg << "<line x1=\"" << x << "\" y1=\"" << num(y) << "\" x2=\"" << x + 24 << "\" y2=\"" << num(y)
		    << "\" stroke=\"" << kPalette[li % std::size(kPalette)] << "\" stroke-width=\"2.5\"/>\n";
		svg << "<text x=\"" << x + 30 << "\" y=\"" << num(y + 4) << "\">" << xml_escape(lines[li]->label)
		    << "</text>\n";
	}
	svg << "</g>\n</svg>\n";
	return svg.str();
}

} // namespace epiforecast::plot
