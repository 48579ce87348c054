#pragma once

#include "epiforecast/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace epiforecast::eval {

namespace detail {

template <typename A, typename B>
void check_pair(const Eigen::MatrixBase<A> &actual, const Eigen::MatrixBase<B> &predicted) {
	if (actual.size() != predicted.size()) {
		throw Error(ErrorKind::ShapeError, "actual has " + std::to_string(actual.size()) + " values, predicted has " +
		                                       std::to_string(predicted.size()));
	}
	if (actual.size() == 0) {
		throw Error(ErrorKind::EmptyInput, "metrics need at least one value");
	}
}

} // namespace detail

template <typename A, typename B>
double rmse(const Eigen::MatrixBase<A> &actual, const Eigen::MatrixBase<B> &predicted) {
	detail::check_pair(actual, predicted);
	return std::sqrt((actual - predicted).squaredNorm() / double(actual.size()));
}

template <typename A, typename B>
double mae(const Eigen::MatrixBase<A> &actual, const Eigen::MatrixBase<B> &predicted) {
	detail::check_pair(actual, predicted);
	return (actual - predicted).cwiseAbs().sum() / double(actual.size());
}

/// Mean absolute percentage error, in percent.
template <typename A, typename B>
double mape_pct(const Eigen::MatrixBase<A> &actual, const Eigen::MatrixBase<B> &predicted) {
	detail::check_pair(actual, predicted);
	for (Eigen::Index i = 0; i < actual.size(); ++i) {
		if (actual(i) == 0.0) {
			throw Error(ErrorKind::ZeroActual, "actual value at index " + std::to_string(i) + " is zero");
		}
	}
	// Percent per term keeps round inputs exact (10 + 5 rather than 0.1 + 0.05).
	return (100.0 * (actual - predicted).array().abs() / actual.array().abs()).sum() / double(actual.size());
}

/// Share of actuals inside [lower, upper], bounds inclusive, in percent.
template <typename A, typename L, typename U>
double coverage90_pct(const Eigen::MatrixBase<A> &actual, const Eigen::MatrixBase<L> &lower,
                      const Eigen::MatrixBase<U> &upper) {
	detail::check_pair(actual, lower);
	detail::check_pair(actual, upper);
	Eigen::Index inside = 0;
	for (Eigen::Index i = 0; i < actual.size(); ++i) {
		if (lower(i) > upper(i)) {
			throw Error(ErrorKind::InvalidInterval, "lower bound exceeds upper bound at index " + std::to_string(i));
		}
		inside += (lower(i) <= actual(i) && actual(i) <= upper(i)) ? 1 : 0;
	}
	return 100.0 * double(inside) / double(actual.size());
}

/// One benchmark cell. When `error` is set the metric fields are meaningless.
struct MetricReport {
	std::string country;
	std::string interval;
	std::string model;
	double rmse = 0.0;
	double mae = 0.0;
	double mape_pct = 0.0;
	double coverage90_pct = 0.0;
	std::optional<std::string> error;
	/// 1-based position inside the (country, interval) group; 0 for error cells.
	int rank = 0;

	bool ok() const { return !error.has_value(); }
};

/// Groups by (country, interval) in first-seen order, sorts each group by rmse,
/// mae, mape then model label, and assigns ranks. Error cells follow the
/// ranked cells of their group, ordered by label.
std::vector<MetricReport> rank(std::vector<MetricReport> reports);

} // namespace epiforecast::eval
