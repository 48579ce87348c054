#include "epiforecast/series.hpp"

#include <cmath>
#include <cstdio>

namespace epiforecast {

std::string_view to_string(ErrorKind kind) {
	switch (kind) {
	case ErrorKind::InvalidArgument: return "InvalidArgument";
	case ErrorKind::InsufficientData: return "InsufficientData";
	case ErrorKind::StateMismatch: return "StateMismatch";
	case ErrorKind::DegenerateScale: return "DegenerateScale";
	case ErrorKind::IoError: return "IoError";
	case ErrorKind::FormatError: return "FormatError";
	case ErrorKind::CellError: return "CellError";
	case ErrorKind::NotFound: return "NotFound";
	case ErrorKind::OutOfRange: return "OutOfRange";
	case ErrorKind::ConvergenceError: return "ConvergenceError";
	case ErrorKind::NoViableModel: return "NoViableModel";
	case ErrorKind::InvalidParams: return "InvalidParams";
	case ErrorKind::PositivityError: return "PositivityError";
	case ErrorKind::ShapeError: return "ShapeError";
	case ErrorKind::DivergenceError: return "DivergenceError";
	case ErrorKind::SingularSystem: return "SingularSystem";
	case ErrorKind::InsufficientResiduals: return "InsufficientResiduals";
	case ErrorKind::EmptyInput: return "EmptyInput";
	case ErrorKind::ZeroActual: return "ZeroActual";
	case ErrorKind::InvalidInterval: return "InvalidInterval";
	}
	return "Unknown";
}

Date make_date(int year, unsigned month, unsigned day) {
	const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}};
	if (!ymd.ok()) {
		throw Error(ErrorKind::FormatError, "invalid calendar date " + std::to_string(year) + "-" +
		                                        std::to_string(month) + "-" + std::to_string(day));
	}
	return Date{ymd};
}

Date parse_iso_date(std::string_view text) {
	int y = 0;
	unsigned m = 0, d = 0;
	char tail = 0;
	const std::string buf(text);
	if (buf.size() != 10 || buf[4] != '-' || buf[7] != '-' ||
	    std::sscanf(buf.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
		throw Error(ErrorKind::FormatError, "expected YYYY-MM-DD date, got '" + buf + "'");
	}
	return make_date(y, m, d);
}

std::string format_iso_date(Date date) {
	const std::chrono::year_month_day ymd{date};
	char buf[16];
	std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()));
	return buf;
}

TimeSeries::TimeSeries(std::string name, Date start, Eigen::VectorXd values)
    : name_(std::move(name)), start_(start), values_(std::move(values)) {
	if (values_.size() == 0) {
		throw Error(ErrorKind::EmptyInput, "time series '" + name_ + "' has no values");
	}
}

TimeSeries::TimeSeries(std::string name, const std::vector<Date> &dates, Eigen::VectorXd values)
    : name_(std::move(name)), start_(dates.empty() ? Date{} : dates.front()), values_(std::move(values)) {
	if (dates.empty() || values_.size() == 0) {
		throw Error(ErrorKind::EmptyInput, "time series '" + name_ + "' has no values");
	}
	if (static_cast<Eigen::Index>(dates.size()) != values_.size()) {
		throw Error(ErrorKind::ShapeError, "dates and values differ in length");
	}
	for (std::size_t i = 1; i < dates.size(); ++i) {
		if (dates[i] - dates[i - 1] != std::chrono::days(1)) {
			throw Error(ErrorKind::FormatError, "dates are not consecutive days at " + format_iso_date(dates[i]));
		}
	}
}

std::vector<Date> TimeSeries::dates() const {
	std::vector<Date> out;
	out.reserve(static_cast<std::size_t>(size()));
	for (Eigen::Index i = 0; i < size(); ++i) {
		out.push_back(date(i));
	}
	return out;
}

std::optional<Eigen::Index> TimeSeries::index_of(Date d) const noexcept {
	const auto offset = (d - start_).count();
	if (offset < 0 || offset >= size()) {
		return std::nullopt;
	}
	return offset;
}

TimeSeries TimeSeries::slice(Eigen::Index first, Eigen::Index count) const {
	if (first < 0 || count < 1 || first + count > size()) {
		throw Error(ErrorKind::OutOfRange, "slice outside series '" + name_ + "'");
	}
	return TimeSeries(name_, date(first), values_.segment(first, count));
}

TimeSeries TimeSeries::with_values(Eigen::VectorXd values) const {
	return TimeSeries(name_, start_, std::move(values));
}

TimeSeries TimeSeries::renamed(std::string name) const {
	return TimeSeries(std::move(name), start_, values_);
}

Eigen::VectorXd difference(const Eigen::VectorXd &values, int d) {
	Eigen::VectorXd out = values;
	for (int pass = 0; pass < d; ++pass) {
		const Eigen::Index n = out.size();
		out = (out.tail(n - 1) - out.head(n - 1)).eval();
	}
	return out;
}

std::pair<TimeSeries, DiffState> difference(const TimeSeries &series, int d) {
	if (d < 0) {
		throw Error(ErrorKind::InvalidArgument, "differencing order must be >= 0");
	}
	if (series.size() <= d) {
		throw Error(ErrorKind::InsufficientData, "series of length " + std::to_string(series.size()) +
		                                             " cannot be differenced " + std::to_string(d) + " times");
	}
	DiffState state{d, {}};
	Eigen::VectorXd current = series.values();
	for (int pass = 0; pass < d; ++pass) {
		state.seeds.push_back(current[0]);
		const Eigen::Index n = current.size();
		current = (current.tail(n - 1) - current.head(n - 1)).eval();
	}
	return {TimeSeries(series.name(), series.date(d), std::move(current)), std::move(state)};
}

TimeSeries inverse_difference(const TimeSeries &diff, const DiffState &state) {
	if (state.order < 0 || static_cast<int>(state.seeds.size()) != state.order) {
		throw Error(ErrorKind::StateMismatch, "differencing state holds " + std::to_string(state.seeds.size()) +
		                                          " seeds for order " + std::to_string(state.order));
	}
	Eigen::VectorXd current = diff.values();
	for (int pass = state.order - 1; pass >= 0; --pass) {
		Eigen::VectorXd up(current.size() + 1);
		up[0] = state.seeds[static_cast<std::size_t>(pass)];
		for (Eigen::Index i = 0; i < current.size(); ++i) {
			up[i + 1] = up[i] + current[i];
		}
		current = std::move(up);
	}
	return TimeSeries(diff.name(), diff.start() - std::chrono::days(state.order), std::move(current));
}

std::pair<TimeSeries, TimeSeries> train_test_split(const TimeSeries &series, const SplitSpec &spec) {
	if (spec.test_len < 1) {
		throw Error(ErrorKind::InvalidArgument, "test length must be >= 1");
	}
	Eigen::Index last = series.size() - 1;
	if (spec.interval_end) {
		const auto idx = series.index_of(*spec.interval_end);
		if (!idx) {
			throw Error(ErrorKind::OutOfRange,
			            "interval end " + format_iso_date(*spec.interval_end) + " is outside series '" + series.name() + "'");
		}
		last = *idx;
	}
	const Eigen::Index total = last + 1;
	if (total <= spec.test_len) {
		throw Error(ErrorKind::InsufficientData, "series '" + series.name() + "' has " + std::to_string(total) +
		                                             " points; need more than the test length " +
		                                             std::to_string(spec.test_len));
	}
	const Eigen::Index train_len = total - spec.test_len;
	return {series.slice(0, train_len), series.slice(train_len, spec.test_len)};
}

std::pair<TimeSeries, ScaleState> minmax_scale(const TimeSeries &series) {
	const ScaleState state{series.values().minCoeff(), series.values().maxCoeff()};
	if (!(state.max > state.min)) {
		throw Error(ErrorKind::DegenerateScale, "series '" + series.name() + "' is constant; cannot min-max scale");
	}
	return {series.with_values(apply_scale(series.values(), state)), state};
}

TimeSeries inverse_scale(const TimeSeries &series, const ScaleState &state) {
	return series.with_values(undo_scale(series.values(), state));
}

SymmetricScaleState fit_symmetric_scale(const Eigen::VectorXd &values) {
	const double maxabs = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
	if (!(maxabs > 0.0) || !std::isfinite(maxabs)) {
		throw Error(ErrorKind::DegenerateScale, "residuals are identically zero; cannot scale");
	}
	return {maxabs};
}

} // namespace epiforecast
