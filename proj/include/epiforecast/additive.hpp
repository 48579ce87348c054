#pragma once

#include "epiforecast/series.hpp"

#include <string>
#include <vector>

namespace epiforecast::additive {

struct Holiday {
	Date date;
	std::string label;
};

struct AdditiveConfig {
	int n_changepoints = 10;
	/// Fraction of the training span eligible for changepoints.
	double changepoint_range = 0.8;
	/// Weekly harmonics; each contributes a sine and a cosine column.
	int fourier_order = 3;
	double lambda_delta = 0.5;
	double lambda_beta = 0.1;
	std::vector<Holiday> holidays;

	void validate() const;
};

/// Piecewise-linear trend plus weekly Fourier terms plus holiday indicators.
/// Time is normalised so the training span maps to [0, 1].
struct AdditiveModel {
	AdditiveConfig config;
	double slope = 0.0;
	double offset = 0.0;
	/// Slope change at each changepoint.
	Eigen::VectorXd delta;
	/// Fourier coefficients (sin_1, cos_1, sin_2, ...) followed by holiday effects.
	Eigen::VectorXd beta;
	/// Changepoint locations on the normalised time axis.
	Eigen::VectorXd changepoints;
	/// Holiday labels in column order.
	std::vector<std::string> holiday_labels;
	Date origin;
	/// Days spanned by the training data (t = days since origin / span).
	double span = 1.0;
	/// y was divided by this for the solve; stored coefficients are rescaled back.
	double y_scale = 1.0;
	double sigma = 0.0;
	Date last_date;
};

struct Components {
	Eigen::VectorXd trend;
	Eigen::VectorXd seasonal;
	Eigen::VectorXd holiday;

	Eigen::VectorXd total() const { return trend + seasonal + holiday; }
};

/// Distinct holiday labels in first-seen order.
std::vector<std::string> holiday_labels(const std::vector<Holiday> &holidays);

/// Columns [1, t, (t - s_j)_+ ..., sin/cos(2 pi k d / 7) ..., holiday indicators],
/// where d counts days since 1970-01-01 so the weekly phase is absolute.
Eigen::MatrixXd build_design(const std::vector<Date> &dates, Date origin, double span, const AdditiveConfig &config,
                             const Eigen::VectorXd &changepoints);

AdditiveModel fit(const TimeSeries &series, const AdditiveConfig &config = {});

Components decompose(const AdditiveModel &model, const std::vector<Date> &dates);

/// Trend value alone, on the original scale.
double trend_at(const AdditiveModel &model, double t);

ForecastResult forecast(const AdditiveModel &model, int h);

} // namespace epiforecast::additive
