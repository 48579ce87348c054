#include "epiforecast/arima.hpp"

#include "epiforecast/optimize.hpp"
#include "epiforecast/parallel.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

namespace epiforecast::arima {

namespace {

constexpr double kRootMargin = 1e-6;

struct Packing {
	bool intercept;
	int p;
	int q;

	Eigen::Index size() const { return (intercept ? 1 : 0) + p + q; }

	Eigen::VectorXd pack(const ArimaParams &params) const {
		Eigen::VectorXd x(size());
		Eigen::Index k = 0;
		if (intercept) {
			x[k++] = params.intercept;
		}
		for (int i = 0; i < p; ++i) {
			x[k++] = params.phi[i];
		}
		for (int j = 0; j < q; ++j) {
			x[k++] = params.theta[j];
		}
		return x;
	}

	ArimaParams unpack(const Eigen::VectorXd &x) const {
		ArimaParams params;
		Eigen::Index k = 0;
		params.intercept = intercept ? x[k++] : 0.0;
		params.phi = x.segment(k, p);
		k += p;
		params.theta = x.segment(k, q);
		return params;
	}
};

/// Least squares y ~ X b via column-pivoting QR.
Eigen::VectorXd least_squares(const Eigen::MatrixXd &X, const Eigen::VectorXd &y) {
	return X.colPivHouseholderQr().solve(y);
}

/// Scales coefficients toward zero until the polynomial is root-admissible.
Eigen::VectorXd shrink_admissible(Eigen::VectorXd c) {
	for (int i = 0; i < 200 && max_inverse_root(c) >= 1.0 - 1e-3; ++i) {
		c *= 0.9;
	}
	return c;
}

bool admissible(const ArimaParams &params) {
	return max_inverse_root(params.phi) < 1.0 - kRootMargin && max_inverse_root(params.theta) < 1.0 - kRootMargin;
}

/// Binomial coefficients of the integration step: y_t = w_t + sum_k a_k y_{t-k}.
std::vector<double> integration_weights(int d) {
	// (1 - B)^d = sum_k (-1)^k C(d,k) B^k, so y_t = w_t - sum_{k>=1} (-1)^k C(d,k) y_{t-k}.
	std::vector<double> a(static_cast<std::size_t>(d + 1), 0.0);
	double binom = 1.0;
	for (int k = 1; k <= d; ++k) {
		binom = binom * (d - k + 1) / k;
		a[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 1.0 : -1.0) * binom;
	}
	return a;
}

// sigma2 comes from the n_eff conditional terms but the likelihood counts all m
// differenced points, so dropping AR start-up terms does not lower the score.
double aicc_of(double css_value, Eigen::Index n_eff, Eigen::Index m, int k) {
	const double nd = static_cast<double>(m);
	const double sigma2 = std::max(css_value / static_cast<double>(n_eff), std::numeric_limits<double>::min());
	const double loglik = -0.5 * nd * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
	const double denom = nd - k - 1.0;
	if (denom <= 0.0) {
		return std::numeric_limits<double>::infinity();
	}
	return -2.0 * loglik + 2.0 * k + 2.0 * k * (k + 1.0) / denom;
}

} // namespace

std::string ArimaOrder::to_string() const {
	return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

ArimaOrder parse_order(const std::string &text) {
	ArimaOrder order;
	char c1 = 0, c2 = 0;
	std::istringstream in(text);
	if (!(in >> order.p >> c1 >> order.d >> c2 >> order.q) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof()) {
		throw Error(ErrorKind::InvalidArgument, "ARIMA order '" + text + "' is not p,d,q");
	}
	if (order.p < 0 || order.d < 0 || order.q < 0) {
		throw Error(ErrorKind::InvalidArgument, "ARIMA orders must be non-negative");
	}
	return order;
}

double max_inverse_root(const Eigen::VectorXd &c) {
	Eigen::Index n = c.size();
	while (n > 0 && c[n - 1] == 0.0) {
		--n;
	}
	if (n == 0) {
		return 0.0;
	}
	if (n == 1) {
		return std::abs(c[0]);
	}
	Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
	companion.row(0) = c.head(n).transpose();
	companion.bottomLeftCorner(n - 1, n - 1).setIdentity();
	const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
	if (solver.info() != Eigen::Success) {
		return std::numeric_limits<double>::infinity();
	}
	return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary(const Eigen::VectorXd &phi) { return max_inverse_root(phi) < 1.0; }
bool is_invertible(const Eigen::VectorXd &theta) { return max_inverse_root(theta) < 1.0; }

Eigen::VectorXd innovations(const Eigen::VectorXd &w, const ArimaParams &params) {
	const Eigen::Index m = w.size();
	const Eigen::Index p = params.phi.size();
	const Eigen::Index q = params.theta.size();
	Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
	for (Eigen::Index t = p; t < m; ++t) {
		double v = w[t] - params.intercept;
		for (Eigen::Index i = 0; i < p; ++i) {
			v -= params.phi[i] * w[t - 1 - i];
		}
		for (Eigen::Index j = 0; j < q && t - 1 - j >= 0; ++j) {
			v += params.theta[j] * e[t - 1 - j];
		}
		e[t] = v;
	}
	return e;
}

double css(const Eigen::VectorXd &w, const ArimaParams &params) {
	const Eigen::Index p = params.phi.size();
	return innovations(w, params).tail(w.size() - p).squaredNorm();
}

ArimaParams hannan_rissanen(const Eigen::VectorXd &w, int p, int q, bool intercept) {
	const Eigen::Index m = w.size();
	ArimaParams params;
	params.phi = Eigen::VectorXd::Zero(p);
	params.theta = Eigen::VectorXd::Zero(q);
	params.intercept = intercept ? w.mean() : 0.0;
	if (p == 0 && q == 0) {
		return params;
	}

	Eigen::VectorXd ehat = Eigen::VectorXd::Zero(m);
	int long_order = 0;
	if (q > 0) {
		long_order = static_cast<int>(std::min<Eigen::Index>(
		    m / 4, std::max<Eigen::Index>(p + q + 1, static_cast<Eigen::Index>(std::ceil(std::sqrt(double(m)))))));
		if (long_order < 1 || m - long_order < long_order + 2) {
			return params;
		}
		const Eigen::Index rows = m - long_order;
		Eigen::MatrixXd X(rows, long_order + 1);
		Eigen::VectorXd y = w.tail(rows);
		for (Eigen::Index r = 0; r < rows; ++r) {
			const Eigen::Index t = r + long_order;
			X(r, 0) = 1.0;
			for (int i = 1; i <= long_order; ++i) {
				X(r, i) = w[t - i];
			}
		}
		const Eigen::VectorXd b = least_squares(X, y);
		ehat.tail(rows) = y - X * b;
	}

	const Eigen::Index start = std::max<Eigen::Index>(p, long_order + q);
	const Eigen::Index rows = m - start;
	const Eigen::Index cols = (intercept ? 1 : 0) + p + q;
	if (rows < cols + 2) {
		return params;
	}
	Eigen::MatrixXd X(rows, cols);
	const Eigen::VectorXd y = w.tail(rows);
	for (Eigen::Index r = 0; r < rows; ++r) {
		const Eigen::Index t = r + start;
		Eigen::Index c = 0;
		if (intercept) {
			X(r, c++) = 1.0;
		}
		for (int i = 1; i <= p; ++i) {
			X(r, c++) = w[t - i];
		}
		for (int j = 1; j <= q; ++j) {
			X(r, c++) = ehat[t - j];
		}
	}
	const Eigen::VectorXd b = least_squares(X, y);
	if (!b.allFinite()) {
		return params;
	}
	Eigen::Index c = 0;
	if (intercept) {
		params.intercept = b[c++];
	}
	params.phi = shrink_admissible(b.segment(c, p));
	c += p;
	params.theta = shrink_admissible(-b.segment(c, q));
	return params;
}

ArimaModel fit(const TimeSeries &series, const ArimaOrder &order, const FitOptions &options) {
	const auto [p, d, q] = std::tuple{order.p, order.d, order.q};
	if (p < 0 || d < 0 || q < 0) {
		throw Error(ErrorKind::InvalidArgument, "ARIMA orders must be non-negative");
	}
	const Eigen::Index n = series.size();
	const Eigen::Index need = d + std::max(p, q) + options.min_sample_margin;
	if (n < need || n <= d + p) {
		throw Error(ErrorKind::InsufficientData, "ARIMA" + order.to_string() + " needs at least " +
		                                             std::to_string(std::max<Eigen::Index>(need, d + p + 1)) +
		                                             " observations, got " + std::to_string(n));
	}
	const bool intercept = d <= 1 && options.intercept.value_or(true);
	const Packing packing{intercept, p, q};

	auto [diffed, diff_state] = difference(series, d);
	const Eigen::VectorXd &w = diffed.values();
	const Eigen::Index m = w.size();

	ArimaParams params;
	params.phi = Eigen::VectorXd::Zero(p);
	params.theta = Eigen::VectorXd::Zero(q);
	bool solved = false;
	bool converged = true;

	if (p == 0 && q == 0) {
		params.intercept = intercept ? w.mean() : 0.0;
		solved = true;
	} else if (q == 0) {
		// With no MA terms the conditional sum of squares is linear least squares.
		const Eigen::Index rows = m - p;
		const Eigen::Index cols = packing.size();
		Eigen::MatrixXd X(rows, cols);
		for (Eigen::Index r = 0; r < rows; ++r) {
			const Eigen::Index t = r + p;
			Eigen::Index c = 0;
			if (intercept) {
				X(r, c++) = 1.0;
			}
			for (int i = 1; i <= p; ++i) {
				X(r, c++) = w[t - i];
			}
		}
		const Eigen::VectorXd b = least_squares(X, w.tail(rows));
		ArimaParams ols = packing.unpack(b);
		if (b.allFinite() && admissible(ols)) {
			params = ols;
			solved = true;
		}
	}

	if (!solved) {
		ArimaParams start = hannan_rissanen(w, p, q, intercept);
		const double start_css = css(w, start);
		const double penalty_scale = (std::isfinite(start_css) ? start_css : 1.0) + 1.0;
		auto objective = [&](const Eigen::VectorXd &x) {
			const ArimaParams trial = packing.unpack(x);
			const double phi_root = max_inverse_root(trial.phi);
			const double theta_root = max_inverse_root(trial.theta);
			const double worst = std::max(phi_root, theta_root);
			if (!(worst < 1.0 - kRootMargin)) {
				return penalty_scale * 1e6 * (1.0 + worst);
			}
			return css(w, trial);
		};
		optimize::NelderMeadOptions nm;
		nm.max_evaluations = options.max_evaluations;
		nm.ftol = 1e-12;
		nm.xtol = 1e-9;
		const Eigen::VectorXd x0 = packing.pack(start);
		const auto result = optimize::minimize(objective, x0, nm, 3);
		params = packing.unpack(result.x);
		if (!admissible(params)) {
			params = start;
		}
		converged = result.converged;
		if (!converged) {
			const Eigen::VectorXd &bx = result.x;
			throw ConvergenceError("ARIMA" + order.to_string() + " optimizer did not converge after " +
			                           std::to_string(result.evaluations) + " evaluations",
			                       std::vector<double>(bx.data(), bx.data() + bx.size()), result.value);
		}
	}

	const Eigen::VectorXd e = innovations(w, params);
	const Eigen::Index n_eff = m - p;
	const double css_value = e.tail(n_eff).squaredNorm();
	const double floor = 1e-16 * std::max(1.0, w.squaredNorm() / double(m));
	params.sigma2 = std::max(css_value / double(n_eff), floor);

	ArimaModel model{
	    order,
	    params,
	    intercept,
	    diff_state,
	    series.slice(d + p, n - d - p),
	    series.slice(d + p, n - d - p),
	    {},
	    {},
	    css_value,
	    aicc_of(css_value, n_eff, m, static_cast<int>(packing.size()) + 1),
	    n,
	    is_stationary(params.phi),
	    converged,
	};

	// One-step predictions on the original scale:
	//   y_hat_t = sum_k a_k y_{t-k} + (c + sum phi_i w_{j-i} - sum theta_j e_{j-k})
	const auto a = integration_weights(d);
	const Eigen::VectorXd &y = series.values();
	Eigen::VectorXd fitted(n - d - p), resid(n - d - p);
	for (Eigen::Index t = d + p; t < n; ++t) {
		const Eigen::Index j = t - d;
		double what = params.intercept;
		for (int i = 1; i <= p; ++i) {
			what += params.phi[i - 1] * w[j - i];
		}
		for (int k = 1; k <= q && j - k >= 0; ++k) {
			what -= params.theta[k - 1] * e[j - k];
		}
		double level = 0.0;
		for (int k = 1; k <= d; ++k) {
			level += a[static_cast<std::size_t>(k)] * y[t - k];
		}
		const double yhat = d > 0 ? level + what : what;
		fitted[t - d - p] = yhat;
		resid[t - d - p] = y[t] - yhat;
	}
	model.fitted = model.fitted.with_values(std::move(fitted));
	model.residuals = model.residuals.with_values(std::move(resid));

	const Eigen::Index tail_len = std::max(p, q) + d;
	model.train_tail.assign(y.data() + (n - tail_len), y.data() + n);
	model.innovation_tail.assign(e.data() + (m - q), e.data() + m);
	return model;
}

namespace {

bool near_unit_root(const ArimaParams &params) {
	constexpr double limit = 1.0 / 1.01;
	return max_inverse_root(params.phi) > limit || max_inverse_root(params.theta) > limit;
}

} // namespace

OrderSelection select_order_detailed(const TimeSeries &series, const OrderGrid &grid, unsigned threads) {
	std::vector<ArimaOrder> cells;
	for (int d = 0; d <= grid.max_d; ++d) {
		for (int p = 0; p <= grid.max_p; ++p) {
			for (int q = 0; q <= grid.max_q; ++q) {
				cells.push_back({p, d, q});
			}
		}
	}
	std::vector<Candidate> candidates(cells.size());
	parallel_for(cells.size(), threads, [&](std::size_t i) {
		candidates[i].order = cells[i];
		try {
			const ArimaModel model = fit(series, cells[i]);
			candidates[i].aicc = model.aicc;
			if (!std::isfinite(model.aicc)) {
				candidates[i].error = "non-finite AICc";
			} else if (near_unit_root(model.params)) {
				// CSS rewards MA roots on the unit circle; such fits are not comparable.
				candidates[i].error = "root within 1% of the unit circle";
			}
		} catch (const Error &err) {
			candidates[i].aicc = std::numeric_limits<double>::infinity();
			candidates[i].error = err.what();
		}
	});

	const Candidate *best = nullptr;
	auto key = [](const Candidate &c) { return std::tuple{c.aicc, c.order.p + c.order.q, c.order.p, c.order.d}; };
	for (const auto &c : candidates) {
		if (!c.error.empty()) {
			continue;
		}
		if (!best || key(c) < key(*best)) {
			best = &c;
		}
	}
	if (!best) {
		std::string msg = "no ARIMA order in the grid could be fitted";
		if (!candidates.empty()) {
			msg += " (first failure: " + candidates.front().error + ")";
		}
		throw Error(ErrorKind::NoViableModel, msg);
	}
	return {best->order, std::move(candidates)};
}

ArimaOrder select_order(const TimeSeries &series, const OrderGrid &grid, unsigned threads) {
	return select_order_detailed(series, grid, threads).order;
}

Eigen::VectorXd psi_weights(const ArimaParams &params, int d, int h) {
	// Full AR operator phi(B)(1 - B)^d, written as 1 - sum_i ar_i B^i.
	Eigen::VectorXd poly = Eigen::VectorXd::Zero(params.phi.size() + 1);
	poly[0] = 1.0;
	poly.tail(params.phi.size()) = -params.phi;
	for (int pass = 0; pass < d; ++pass) {
		Eigen::VectorXd next = Eigen::VectorXd::Zero(poly.size() + 1);
		next.head(poly.size()) += poly;
		next.tail(poly.size()) -= poly;
		poly = std::move(next);
	}
	const Eigen::VectorXd ar = -poly.tail(poly.size() - 1);
	const Eigen::Index q = params.theta.size();

	Eigen::VectorXd psi = Eigen::VectorXd::Zero(h);
	if (h > 0) {
		psi[0] = 1.0;
	}
	for (Eigen::Index j = 1; j < h; ++j) {
		double v = j <= q ? -params.theta[j - 1] : 0.0;
		for (Eigen::Index i = 1; i <= std::min<Eigen::Index>(j, ar.size()); ++i) {
			v += ar[i - 1] * psi[j - i];
		}
		psi[j] = v;
	}
	return psi;
}

ForecastResult forecast(const ArimaModel &model, int h) {
	if (h < 1) {
		throw Error(ErrorKind::InvalidArgument, "forecast horizon must be >= 1");
	}
	const auto [p, d, q] = std::tuple{model.order.p, model.order.d, model.order.q};
	const ArimaParams &params = model.params;

	const Eigen::Map<const Eigen::VectorXd> tail(model.train_tail.data(), Eigen::Index(model.train_tail.size()));
	const Eigen::VectorXd tail_vec = tail;
	std::vector<double> w_hist;
	if (tail_vec.size() > d) {
		const Eigen::VectorXd wt = difference(tail_vec, d);
		w_hist.assign(wt.data(), wt.data() + wt.size());
	}
	std::vector<double> e_hist(model.innovation_tail.begin(), model.innovation_tail.end());
	// Last value of each differencing level, level k = Delta^k y.
	std::vector<double> levels(static_cast<std::size_t>(d));
	for (int k = 0; k < d; ++k) {
		const Eigen::VectorXd dk = difference(tail_vec, k);
		levels[static_cast<std::size_t>(k)] = dk[dk.size() - 1];
	}

	ForecastResult out;
	out.model = "ARIMA";
	out.start = model.fitted.end() + std::chrono::days(1);
	out.point.resize(h);
	for (int step = 0; step < h; ++step) {
		double what = params.intercept;
		for (int i = 1; i <= p; ++i) {
			what += params.phi[i - 1] * w_hist[w_hist.size() - static_cast<std::size_t>(i)];
		}
		for (int j = 1; j <= q; ++j) {
			what -= params.theta[j - 1] * e_hist[e_hist.size() - static_cast<std::size_t>(j)];
		}
		w_hist.push_back(what);
		e_hist.push_back(0.0);
		double x = what;
		for (int k = d - 1; k >= 0; --k) {
			levels[static_cast<std::size_t>(k)] += x;
			x = levels[static_cast<std::size_t>(k)];
		}
		out.point[step] = x;
	}

	const Eigen::VectorXd psi = psi_weights(params, d, h);
	out.lower.resize(h);
	out.upper.resize(h);
	double acc = 0.0;
	for (int k = 0; k < h; ++k) {
		acc += psi[k] * psi[k];
		const double half = kZ90 * std::sqrt(params.sigma2 * acc);
		out.lower[k] = out.point[k] - half;
		out.upper[k] = out.point[k] + half;
	}
	return out;
}

TimeSeries residual_series(const ArimaModel &model) { return model.residuals; }

TimeSeries simulate(const ArimaOrder &order, const ArimaParams &params, int n, std::uint64_t seed) {
	if (n < 1) {
		throw Error(ErrorKind::InvalidArgument, "simulation length must be >= 1");
	}
	if (params.phi.size() != order.p || params.theta.size() != order.q) {
		throw Error(ErrorKind::ShapeError, "parameter lengths do not match ARIMA" + order.to_string());
	}
	if (!is_stationary(params.phi)) {
		throw Error(ErrorKind::InvalidParams, "AR polynomial has a root on or inside the unit circle");
	}
	if (!(params.sigma2 > 0.0)) {
		throw Error(ErrorKind::InvalidParams, "innovation variance must be positive");
	}
	std::mt19937_64 rng(seed);
	std::normal_distribution<double> noise(0.0, std::sqrt(params.sigma2));
	const int burn = 200 + order.p + order.q;
	const int total = burn + n;
	std::vector<double> w(static_cast<std::size_t>(total), 0.0), e(static_cast<std::size_t>(total), 0.0);
	for (int t = 0; t < total; ++t) {
		e[t] = noise(rng);
		double v = params.intercept + e[t];
		for (int i = 1; i <= order.p && t - i >= 0; ++i) {
			v += params.phi[i - 1] * w[t - i];
		}
		for (int j = 1; j <= order.q && t - j >= 0; ++j) {
			v -= params.theta[j - 1] * e[t - j];
		}
		w[t] = v;
	}
	Eigen::VectorXd out = Eigen::Map<Eigen::VectorXd>(w.data() + burn, n);
	for (int pass = 0; pass < order.d; ++pass) {
		double acc = 0.0;
		for (Eigen::Index i = 0; i < out.size(); ++i) {
			acc += out[i];
			out[i] = acc;
		}
	}
	return TimeSeries("simulated", make_date(2000, 1, 1), std::move(out));
}

} // namespace epiforecast::arima
