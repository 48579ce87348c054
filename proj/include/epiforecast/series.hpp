#pragma once

#include "epiforecast/error.hpp"

#include <Eigen/Core>

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epiforecast {

using Date = std::chrono::sys_days;

Date make_date(int year, unsigned month, unsigned day);
/// Parses YYYY-MM-DD.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(Date date);

/// Daily series with no gaps. Dates are implicit: value i is observed on
/// start() + i days, which makes the one-day-step invariant structural.
class TimeSeries {
public:
	TimeSeries(std::string name, Date start, Eigen::VectorXd values);
	/// Validates that `dates` are consecutive days; throws FormatError on a gap.
	TimeSeries(std::string name, const std::vector<Date> &dates, Eigen::VectorXd values);

	const std::string &name() const noexcept { return name_; }
	Date start() const noexcept { return start_; }
	Date end() const noexcept { return start_ + std::chrono::days(size() - 1); }
	Date date(Eigen::Index i) const noexcept { return start_ + std::chrono::days(i); }
	std::vector<Date> dates() const;
	const Eigen::VectorXd &values() const noexcept { return values_; }
	double operator[](Eigen::Index i) const noexcept { return values_[i]; }
	Eigen::Index size() const noexcept { return values_.size(); }

	/// Index of `date`, or nullopt when outside the series.
	std::optional<Eigen::Index> index_of(Date date) const noexcept;
	/// Sub-series [first, first + count).
	TimeSeries slice(Eigen::Index first, Eigen::Index count) const;
	TimeSeries with_values(Eigen::VectorXd values) const;
	TimeSeries renamed(std::string name) const;

private:
	std::string name_;
	Date start_;
	Eigen::VectorXd values_;
};

/// Leading values consumed by each differencing pass, in application order.
struct DiffState {
	int order = 0;
	std::vector<double> seeds;
};

struct ScaleState {
	double min = 0.0;
	double max = 1.0;
};

/// Sign-preserving scaling [-maxabs, maxabs] -> [-1, 1] for signed residuals.
struct SymmetricScaleState {
	double maxabs = 1.0;
};

struct SplitSpec {
	int test_len = 10;
	std::optional<Date> interval_end;
};

/// Point forecasts with 90% bounds for horizons 1..h after `start - 1`.
struct ForecastResult {
	std::string model;
	Date start;
	Eigen::VectorXd point;
	Eigen::VectorXd lower;
	Eigen::VectorXd upper;

	Eigen::Index horizon() const noexcept { return point.size(); }
	Date date(Eigen::Index k) const noexcept { return start + std::chrono::days(k); }
};

/// Two-sided 90% standard normal quantile.
inline constexpr double kZ90 = 1.6448536269514722;

std::pair<TimeSeries, DiffState> difference(const TimeSeries &series, int d);
TimeSeries inverse_difference(const TimeSeries &diff, const DiffState &state);

/// Plain vector versions used inside the models.
Eigen::VectorXd difference(const Eigen::VectorXd &values, int d);

std::pair<TimeSeries, TimeSeries> train_test_split(const TimeSeries &series, const SplitSpec &spec);

std::pair<TimeSeries, ScaleState> minmax_scale(const TimeSeries &series);
TimeSeries inverse_scale(const TimeSeries &series, const ScaleState &state);

template <typename Derived>
Eigen::VectorXd apply_scale(const Eigen::MatrixBase<Derived> &values, const ScaleState &state) {
	return ((values.array() - state.min) / (state.max - state.min)).matrix();
}

template <typename Derived>
Eigen::VectorXd undo_scale(const Eigen::MatrixBase<Derived> &values, const ScaleState &state) {
	return (values.array() * (state.max - state.min) + state.min).matrix();
}

/// Throws DegenerateScale for an all-zero input.
SymmetricScaleState fit_symmetric_scale(const Eigen::VectorXd &values);

} // namespace epiforecast
