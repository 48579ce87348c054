#pragma once

#include "epiforecast/series.hpp"

#include <vector>

namespace epiforecast::smoothing {

struct HwParams {
	double alpha = 0.5;
	double beta = 0.1;
	double gamma = 0.1;
	int m = 7;
};

/// Level, trend and a ring of m multiplicative seasonal indices. seasonal[0]
/// is the index that applies to the next observation (S_{i+1-m}).
struct HwState {
	double level = 0.0;
	double trend = 0.0;
	std::vector<double> seasonal;
};

struct HwModel {
	HwParams params;
	HwState state;
	/// False when the initial indices were all within 1 +/- 0.01 and the model
	/// fell back to double (Holt) smoothing.
	bool seasonal = true;
	/// One-step in-sample errors for observations after the first season.
	TimeSeries residuals;
	double sse = 0.0;
	double sigma = 0.0;
	Date last_date;
};

HwState initialize(const TimeSeries &series, int m);

/// One update in the order level, trend, seasonal.
HwState smooth_step(const HwState &state, double observation, const HwParams &params);

/// Sum of squared one-step errors over observations m..n-1 for fixed params.
double in_sample_sse(const TimeSeries &series, const HwParams &params, bool seasonal = true);

HwModel fit(const TimeSeries &series, int m = 7);

ForecastResult forecast(const HwModel &model, int h);

/// Point forecasts from a bare state (F_{i+k} = (L + kB) S_{i+k-m}).
Eigen::VectorXd project(const HwState &state, int h);

} // namespace epiforecast::smoothing
