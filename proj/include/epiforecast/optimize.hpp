#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>

namespace epiforecast::optimize {

struct NelderMeadOptions {
	int max_evaluations = 20000;
	/// Stop when the spread of objective values across the simplex falls below
	/// ftol * (|f_best| + ftol) and the simplex diameter below xtol.
	double ftol = 1e-10;
	double xtol = 1e-8;
	double initial_step = 0.1;
	/// Optional box; vertices are projected onto it.
	std::optional<Eigen::VectorXd> lower;
	std::optional<Eigen::VectorXd> upper;
};

struct NelderMeadResult {
	Eigen::VectorXd x;
	double value = 0.0;
	int evaluations = 0;
	bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd &)>;

/// Standard Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
/// The starting point is a simplex vertex, so the result is never worse than it.
NelderMeadResult nelder_mead(const Objective &f, const Eigen::VectorXd &start, const NelderMeadOptions &options = {});

/// Runs nelder_mead, restarting from the best point until two consecutive
/// runs agree or `restarts` is exhausted.
NelderMeadResult minimize(const Objective &f, const Eigen::VectorXd &start, const NelderMeadOptions &options = {},
                          int restarts = 2);

} // namespace epiforecast::optimize
