#include "epiforecast/hybrid.hpp"

#include <algorithm>

namespace epiforecast::hybrid {

HybridModel fit(const TimeSeries &series, const HybridOptions &options) {
	const arima::ArimaOrder order = options.order ? *options.order : arima::select_order(series, options.grid, options.threads);
	return fit_from_linear(arima::fit(series, order, options.arima), options.narnn, options.select_lags);
}

HybridModel fit_from_linear(arima::ArimaModel linear, const neural::NarnnConfig &config, bool select_lags) {
	const TimeSeries residuals = arima::residual_series(linear);
	int max_lags = config.lags;
	if (select_lags) {
		for (const int l : config.lag_candidates) {
			max_lags = std::max(max_lags, l);
		}
	}
	const Eigen::Index needed = max_lags + 10 + (select_lags ? config.validation_len : 0);
	if (residuals.size() <= needed) {
		throw Error(ErrorKind::InsufficientResiduals, "ARIMA" + linear.order.to_string() + " left " +
		                                                  std::to_string(residuals.size()) +
		                                                  " residuals; the NARNN stage needs more than " +
		                                                  std::to_string(needed));
	}
	neural::NarnnConfig cfg = config;
	if (select_lags) {
		cfg.lags = neural::select_lags(residuals, cfg);
	}
	neural::NarnnModel nonlinear = neural::narnn_fit(residuals, cfg);
	return HybridModel{std::move(linear), std::move(nonlinear), residuals.values().tail(cfg.lags)};
}

Decomposition decompose_forecast(const HybridModel &model, int h) {
	Decomposition out;
	out.linear = arima::forecast(model.linear, h);
	out.nonlinear = neural::narnn_forecast(model.nonlinear, model.residual_tail, h);
	return out;
}

ForecastResult forecast(const HybridModel &model, int h) {
	const Decomposition parts = decompose_forecast(model, h);
	ForecastResult out = parts.linear;
	out.model = "Hybrid";
	out.point = parts.linear.point + parts.nonlinear;
	out.lower = parts.linear.lower + parts.nonlinear;
	out.upper = parts.linear.upper + parts.nonlinear;
	return out;
}

} // namespace epiforecast::hybrid
