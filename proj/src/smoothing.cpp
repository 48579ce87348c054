#include "epiforecast/smoothing.hpp"

#include "epiforecast/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace epiforecast::smoothing {

namespace {

void check_positive(const TimeSeries &series) {
	for (Eigen::Index i = 0; i < series.size(); ++i) {
		if (!(series[i] > 0.0)) {
			throw Error(ErrorKind::PositivityError, "multiplicative Holt-Winters needs positive values; '" +
			                                            series.name() + "' has " + std::to_string(series[i]) +
			                                            " on " + format_iso_date(series.date(i)));
		}
	}
}

bool negligible_seasonality(const HwState &state) {
	return std::all_of(state.seasonal.begin(), state.seasonal.end(), [](double s) { return std::abs(s - 1.0) <= 0.01; });
}

HwState initial_state(const TimeSeries &series, int m, bool seasonal) {
	HwState state = initialize(series, m);
	if (!seasonal) {
		std::fill(state.seasonal.begin(), state.seasonal.end(), 1.0);
	}
	return state;
}

double run_sse(const TimeSeries &series, const HwParams &params, const HwState &start, Eigen::VectorXd *errors,
               HwState *final_state) {
	HwState state = start;
	double sse = 0.0;
	const Eigen::Index m = params.m;
	for (Eigen::Index t = m; t < series.size(); ++t) {
		const double pred = (state.level + state.trend) * state.seasonal.front();
		const double err = series[t] - pred;
		if (errors) {
			(*errors)[t - m] = err;
		}
		sse += err * err;
		state = smooth_step(state, series[t], params);
	}
	if (final_state) {
		*final_state = std::move(state);
	}
	return sse;
}

} // namespace

HwState initialize(const TimeSeries &series, int m) {
	if (m < 2) {
		throw Error(ErrorKind::InvalidArgument, "season length must be >= 2");
	}
	if (series.size() < 2 * m) {
		throw Error(ErrorKind::InsufficientData, "Holt-Winters needs two full seasons (" + std::to_string(2 * m) +
		                                             " points), got " + std::to_string(series.size()));
	}
	check_positive(series);
	const Eigen::VectorXd &y = series.values();
	const double first = y.head(m).mean();
	const double second = y.segment(m, m).mean();
	HwState state;
	state.level = first;
	state.trend = (second - first) / m;
	Eigen::VectorXd s = y.head(m) / first;
	s /= s.mean();
	state.seasonal.assign(s.data(), s.data() + m);
	return state;
}

HwState smooth_step(const HwState &state, double observation, const HwParams &params) {
	if (!(observation > 0.0)) {
		throw Error(ErrorKind::PositivityError, "observation must be positive, got " + std::to_string(observation));
	}
	const double s_old = state.seasonal.front();
	HwState next;
	// A collapsing trend may not drag the level below zero, or the next index
	// would flip sign.
	const double projected = std::max(state.level + state.trend, 0.0);
	next.level = params.alpha * observation / s_old + (1.0 - params.alpha) * projected;
	next.trend = params.beta * (next.level - state.level) + (1.0 - params.beta) * state.trend;
	const double s_new =
	    next.level > 0.0 ? params.gamma * observation / next.level + (1.0 - params.gamma) * s_old : s_old;
	next.seasonal.reserve(state.seasonal.size());
	next.seasonal.assign(state.seasonal.begin() + 1, state.seasonal.end());
	next.seasonal.push_back(s_new);
	return next;
}

double in_sample_sse(const TimeSeries &series, const HwParams &params, bool seasonal) {
	return run_sse(series, params, initial_state(series, params.m, seasonal), nullptr, nullptr);
}

HwModel fit(const TimeSeries &series, int m) {
	const HwState init = initialize(series, m);
	const bool seasonal = !negligible_seasonality(init);
	const HwState start = initial_state(series, m, seasonal);

	const int dims = seasonal ? 3 : 2;
	auto to_params = [&](const Eigen::VectorXd &x) {
		return HwParams{x[0], x[1], seasonal ? x[2] : 0.0, m};
	};
	auto objective = [&](const Eigen::VectorXd &x) {
		return run_sse(series, to_params(x), start, nullptr, nullptr);
	};

	optimize::NelderMeadOptions nm;
	nm.lower = Eigen::VectorXd::Zero(dims);
	nm.upper = Eigen::VectorXd::Ones(dims);
	nm.max_evaluations = 4000;
	nm.initial_step = 0.05;

	const double lattice[] = {0.1, 0.5, 0.9};
	bool have = false;
	Eigen::VectorXd best_x;
	double best_sse = 0.0;
	auto consider = [&](const Eigen::VectorXd &x, double value) {
		auto key = [&](const Eigen::VectorXd &v, double f) {
			return std::tuple{f, v[0], v[1], dims == 3 ? v[2] : 0.0};
		};
		if (!have || key(x, value) < key(best_x, best_sse)) {
			best_x = x;
			best_sse = value;
			have = true;
		}
	};
	for (const double a : lattice) {
		for (const double b : lattice) {
			for (const double g : lattice) {
				if (!seasonal && g != lattice[0]) {
					continue;
				}
				Eigen::VectorXd x0(dims);
				x0[0] = a;
				x0[1] = b;
				if (seasonal) {
					x0[2] = g;
				}
				const auto res = optimize::nelder_mead(objective, x0, nm);
				consider(res.x, res.value);
			}
		}
	}

	HwModel model{to_params(best_x), {}, seasonal, series.slice(m, series.size() - m), 0.0, 0.0, series.end()};
	Eigen::VectorXd errors(series.size() - m);
	model.sse = run_sse(series, model.params, start, &errors, &model.state);
	model.residuals = model.residuals.with_values(std::move(errors));
	model.sigma = std::sqrt(model.sse / double(series.size() - m));
	return model;
}

Eigen::VectorXd project(const HwState &state, int h) {
	const std::size_t m = state.seasonal.size();
	Eigen::VectorXd out(h);
	for (int k = 1; k <= h; ++k) {
		out[k - 1] = (state.level + k * state.trend) * state.seasonal[static_cast<std::size_t>(k - 1) % m];
	}
	return out;
}

ForecastResult forecast(const HwModel &model, int h) {
	if (h < 1) {
		throw Error(ErrorKind::InvalidArgument, "forecast horizon must be >= 1");
	}
	ForecastResult out;
	out.model = "Holt-Winters";
	out.start = model.last_date + std::chrono::days(1);
	out.point = project(model.state, h);
	out.lower.resize(h);
	out.upper.resize(h);
	for (int k = 1; k <= h; ++k) {
		const double half = kZ90 * model.sigma * std::sqrt(double(k));
		out.lower[k - 1] = out.point[k - 1] - half;
		out.upper[k - 1] = out.point[k - 1] + half;
	}
	return out;
}

} // namespace epiforecast::smoothing
