#pragma once

#include "epiforecast/arima.hpp"
#include "epiforecast/neural.hpp"

#include <optional>

namespace epiforecast::hybrid {

/// Linear ARIMA stage plus a NARNN trained on its in-sample residuals.
struct HybridModel {
	arima::ArimaModel linear;
	neural::NarnnModel nonlinear;
	/// Last `nonlinear.lags()` residuals, oldest first.
	Eigen::VectorXd residual_tail;
};

struct HybridOptions {
	/// Fixed ARIMA order; searched over `grid` when empty.
	std::optional<arima::ArimaOrder> order;
	arima::OrderGrid grid;
	arima::FitOptions arima;
	neural::NarnnConfig narnn;
	/// Choose the lag count from narnn.lag_candidates instead of using narnn.lags.
	bool select_lags = true;
	unsigned threads = 1;
};

HybridModel fit(const TimeSeries &series, const HybridOptions &options = {});

/// Second stage only, reusing an already fitted linear model.
HybridModel fit_from_linear(arima::ArimaModel linear, const neural::NarnnConfig &config, bool select_lags = true);

struct Decomposition {
	ForecastResult linear;
	Eigen::VectorXd nonlinear;
};

Decomposition decompose_forecast(const HybridModel &model, int h);

/// point = linear point + nonlinear point; bounds are the linear bounds shifted
/// by the nonlinear point.
ForecastResult forecast(const HybridModel &model, int h);

} // namespace epiforecast::hybrid
