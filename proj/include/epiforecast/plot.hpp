#pragma once

#include "epiforecast/series.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epiforecast::plot {

struct Line {
	std::string label;
	std::vector<Date> dates;
	Eigen::VectorXd values;
	/// 90% bounds, empty when the source has none.
	Eigen::VectorXd lower;
	Eigen::VectorXd upper;
};

/// Reads `date,point,lower90,upper90` or `date,actual,point,lower90,upper90`.
/// Throws FormatError on any other header or when there are no rows.
Line read_forecast_csv(std::string_view text, std::string label);

/// Reads a canonical `date,value` file.
Line read_actuals_csv(std::string_view text, std::string label = "Actual");

struct PlotOptions {
	std::string title = "Cumulative confirmed cases";
	int width = 960;
	int height = 540;
	/// Forecast whose 90% band is shaded; none when unset.
	std::optional<std::size_t> band;
};

/// Self-contained SVG: one polyline per line (actuals first), one polygon for
/// the shaded band, a legend and a dated x axis.
std::string render_svg(const Line &actual, const std::vector<Line> &forecasts, const PlotOptions &options = {});

std::string xml_escape(std::string_view text);

} // namespace epiforecast::plot
