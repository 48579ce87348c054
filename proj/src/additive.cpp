#include "epiforecast/additive.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace epiforecast::additive {

namespace {

double normalised_time(Date date, Date origin, double span) {
	return double((date - origin).count()) / span;
}

double day_number(Date date) { return double(date.time_since_epoch().count()); }

} // namespace

void AdditiveConfig::validate() const {
	if (n_changepoints < 0) {
		throw Error(ErrorKind::InvalidArgument, "n_changepoints must be >= 0");
	}
	if (!(changepoint_range > 0.0 && changepoint_range <= 1.0)) {
		throw Error(ErrorKind::InvalidArgument, "changepoint_range must lie in (0, 1]");
	}
	if (fourier_order < 0) {
		throw Error(ErrorKind::InvalidArgument, "fourier_order must be >= 0");
	}
	if (!(lambda_delta >= 0.0) || !(lambda_beta >= 0.0)) {
		throw Error(ErrorKind::InvalidArgument, "ridge penalties must be >= 0");
	}
}

std::vector<std::string> holiday_labels(const std::vector<Holiday> &holidays) {
	std::vector<std::string> labels;
	for (const auto &h : holidays) {
		if (std::find(labels.begin(), labels.end(), h.label) == labels.end()) {
			labels.push_back(h.label);
		}
	}
	return labels;
}

Eigen::MatrixXd build_design(const std::vector<Date> &dates, Date origin, double span, const AdditiveConfig &config,
                             const Eigen::VectorXd &changepoints) {
	const auto labels = holiday_labels(config.holidays);
	const Eigen::Index n_cp = changepoints.size();
	const Eigen::Index cols = 2 + n_cp + 2 * config.fourier_order + Eigen::Index(labels.size());
	Eigen::MatrixXd x = Eigen::MatrixXd::Zero(Eigen::Index(dates.size()), cols);
	for (Eigen::Index r = 0; r < x.rows(); ++r) {
		const Date date = dates[std::size_t(r)];
		const double t = normalised_time(date, origin, span);
		x(r, 0) = 1.0;
		x(r, 1) = t;
		for (Eigen::Index j = 0; j < n_cp; ++j) {
			x(r, 2 + j) = t > changepoints[j] ? t - changepoints[j] : 0.0;
		}
		const double d = day_number(date);
		for (int k = 1; k <= config.fourier_order; ++k) {
			const double angle = 2.0 * std::numbers::pi * k * d / 7.0;
			x(r, 2 + n_cp + 2 * (k - 1)) = std::sin(angle);
			x(r, 2 + n_cp + 2 * (k - 1) + 1) = std::cos(angle);
		}
		const Eigen::Index base = 2 + n_cp + 2 * config.fourier_order;
		for (const auto &h : config.holidays) {
			if (h.date == date) {
				const auto pos = std::find(labels.begin(), labels.end(), h.label) - labels.begin();
				x(r, base + pos) = 1.0;
			}
		}
	}
	return x;
}

AdditiveModel fit(const TimeSeries &series, const AdditiveConfig &config) {
	config.validate();
	if (series.size() < 14) {
		throw Error(ErrorKind::InsufficientData,
		            "additive model needs at least 14 points, got " + std::to_string(series.size()));
	}
	AdditiveModel model;
	model.config = config;
	model.origin = series.start();
	model.span = double(series.size() - 1);
	model.last_date = series.end();
	model.holiday_labels = holiday_labels(config.holidays);
	const double maxabs = series.values().cwiseAbs().maxCoeff();
	model.y_scale = maxabs > 0.0 ? maxabs : 1.0;

	model.changepoints.resize(config.n_changepoints);
	for (int j = 0; j < config.n_changepoints; ++j) {
		model.changepoints[j] = config.changepoint_range * double(j + 1) / double(config.n_changepoints);
	}

	const Eigen::MatrixXd x = build_design(series.dates(), model.origin, model.span, config, model.changepoints);
	const Eigen::VectorXd y = series.values() / model.y_scale;
	const Eigen::Index n = x.rows();
	const Eigen::Index p = x.cols();
	const Eigen::Index n_cp = config.n_changepoints;

	// Ridge as augmented least squares: rows sqrt(lambda) * I on the penalised block.
	Eigen::VectorXd penalty = Eigen::VectorXd::Zero(p);
	penalty.segment(2, n_cp).setConstant(std::sqrt(config.lambda_delta));
	penalty.tail(p - 2 - n_cp).setConstant(std::sqrt(config.lambda_beta));
	Eigen::MatrixXd a(n + p, p);
	a.topRows(n) = x;
	a.bottomRows(p) = penalty.asDiagonal();
	Eigen::VectorXd b = Eigen::VectorXd::Zero(n + p);
	b.head(n) = y;

	const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
	if (qr.rank() < p) {
		throw Error(ErrorKind::SingularSystem, "additive design is rank deficient (rank " + std::to_string(qr.rank()) +
		                                           " of " + std::to_string(p) + "); raise the ridge penalties");
	}
	const Eigen::VectorXd coef = qr.solve(b) * model.y_scale;
	model.offset = coef[0];
	model.slope = coef[1];
	model.delta = coef.segment(2, n_cp);
	model.beta = coef.tail(p - 2 - n_cp);

	const Eigen::VectorXd resid = series.values() - x * coef;
	model.sigma = std::sqrt(resid.squaredNorm() / double(n));
	return model;
}

double trend_at(const AdditiveModel &model, double t) {
	double g = model.offset + model.slope * t;
	for (Eigen::Index j = 0; j < model.changepoints.size(); ++j) {
		if (t > model.changepoints[j]) {
			g += model.delta[j] * (t - model.changepoints[j]);
		}
	}
	return g;
}

Components decompose(const AdditiveModel &model, const std::vector<Date> &dates) {
	const Eigen::MatrixXd x = build_design(dates, model.origin, model.span, model.config, model.changepoints);
	const Eigen::Index n_cp = model.changepoints.size();
	const Eigen::Index n_fourier = 2 * model.config.fourier_order;
	Eigen::VectorXd trend_coef(2 + n_cp);
	trend_coef << model.offset, model.slope, model.delta;
	Components c;
	c.trend = x.leftCols(2 + n_cp) * trend_coef;
	c.seasonal = x.middleCols(2 + n_cp, n_fourier) * model.beta.head(n_fourier);
	c.holiday = x.rightCols(x.cols() - 2 - n_cp - n_fourier) * model.beta.tail(model.beta.size() - n_fourier);
	return c;
}

ForecastResult forecast(const AdditiveModel &model, int h) {
	if (h < 1) {
		throw Error(ErrorKind::InvalidArgument, "forecast horizon must be >= 1");
	}
	std::vector<Date> dates;
	for (int k = 1; k <= h; ++k) {
		dates.push_back(model.last_date + std::chrono::days(k));
	}
	ForecastResult out;
	out.model = "Additive";
	out.start = dates.front();
	out.point = decompose(model, dates).total();
	out.lower.resize(h);
	out.upper.resize(h);
	for (int k = 1; k <= h; ++k) {
		const double half = kZ90 * model.sigma * std::sqrt(double(k));
		out.lower[k - 1] = out.point[k - 1] - half;
		out.upper[k - 1] = out.point[k - 1] + half;
	}
	return out;
}

} // namespace epiforecast::additive
