#pragma once

#include "epiforecast/series.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace epiforecast::arima {

struct ArimaOrder {
	int p = 0;
	int d = 0;
	int q = 0;

	auto operator<=>(const ArimaOrder &) const = default;
	std::string to_string() const;
};

/// Parses "p,d,q".
ArimaOrder parse_order(const std::string &text);

/// Coefficients of
///   w_t = intercept + sum_i phi_i w_{t-i} + e_t - sum_j theta_j e_{t-j}
/// where w is the d-times differenced series. Note the minus sign on the MA
/// terms.
struct ArimaParams {
	Eigen::VectorXd phi;
	Eigen::VectorXd theta;
	double intercept = 0.0;
	double sigma2 = 1.0;
};

struct FitOptions {
	/// Estimate a drift term. Defaults to true for d <= 1; always off for d = 2.
	std::optional<bool> intercept;
	/// Required observations beyond d + max(p, q).
	int min_sample_margin = 20;
	int max_evaluations = 20000;
};

struct ArimaModel {
	ArimaOrder order;
	ArimaParams params;
	bool has_intercept = false;
	DiffState diff_state;
	/// One-step in-sample predictions on the original scale.
	TimeSeries fitted;
	/// observed - fitted, on the same dates as `fitted`.
	TimeSeries residuals;
	/// Last max(p, q) + d observations.
	std::vector<double> train_tail;
	/// Last q innovations on the differenced scale.
	std::vector<double> innovation_tail;
	double css = 0.0;
	double aicc = 0.0;
	Eigen::Index n_obs = 0;
	bool stationary = true;
	bool converged = true;
};

struct OrderGrid {
	int max_p = 5;
	int max_d = 2;
	int max_q = 5;
};

/// One cell of an order search.
struct Candidate {
	ArimaOrder order;
	double aicc = 0.0;
	std::string error;
};

struct OrderSelection {
	ArimaOrder order;
	std::vector<Candidate> candidates;
};

/// AR polynomial 1 - sum phi_i z^i has all roots outside the unit circle.
bool is_stationary(const Eigen::VectorXd &phi);
/// MA polynomial 1 - sum theta_j z^j has all roots outside the unit circle.
bool is_invertible(const Eigen::VectorXd &theta);
/// Largest modulus of the reciprocal roots of 1 - sum c_i z^i.
double max_inverse_root(const Eigen::VectorXd &coefficients);

/// Conditional innovations with zero pre-sample errors; e_t = 0 for t < p.
Eigen::VectorXd innovations(const Eigen::VectorXd &w, const ArimaParams &params);
/// Sum of e_t^2 for t >= p.
double css(const Eigen::VectorXd &w, const ArimaParams &params);

/// Long-AR residual regression estimate used as the optimizer start.
ArimaParams hannan_rissanen(const Eigen::VectorXd &w, int p, int q, bool intercept);

ArimaModel fit(const TimeSeries &series, const ArimaOrder &order, const FitOptions &options = {});

/// Minimises AICc over the grid; ties go to smaller p+q, then p, then d.
OrderSelection select_order_detailed(const TimeSeries &series, const OrderGrid &grid = {}, unsigned threads = 1);
ArimaOrder select_order(const TimeSeries &series, const OrderGrid &grid = {}, unsigned threads = 1);

/// Psi weights psi_0..psi_{h-1} of phi(B)(1-B)^d w = theta(B) e.
Eigen::VectorXd psi_weights(const ArimaParams &params, int d, int h);

ForecastResult forecast(const ArimaModel &model, int h);

TimeSeries residual_series(const ArimaModel &model);

TimeSeries simulate(const ArimaOrder &order, const ArimaParams &params, int n, std::uint64_t seed);

} // namespace epiforecast::arima
