#include "epiforecast/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace epiforecast::optimize {

namespace {

Eigen::VectorXd project(Eigen::VectorXd x, const NelderMeadOptions &opt) {
	if (opt.lower) {
		x = x.cwiseMax(*opt.lower);
	}
	if (opt.upper) {
		x = x.cwiseMin(*opt.upper);
	}
	return x;
}

double safe(double v) {
	return std::isfinite(v) ? v : std::numeric_limits<double>::max();
}

} // namespace

NelderMeadResult nelder_mead(const Objective &f, const Eigen::VectorXd &start, const NelderMeadOptions &opt) {
	const Eigen::Index n = start.size();
	NelderMeadResult result;
	if (n == 0) {
		result.x = start;
		result.value = safe(f(start));
		result.evaluations = 1;
		result.converged = true;
		return result;
	}

	int evals = 0;
	auto eval = [&](const Eigen::VectorXd &x) {
		++evals;
		return safe(f(x));
	};

	std::vector<Eigen::VectorXd> simplex;
	std::vector<double> values;
	simplex.push_back(project(start, opt));
	values.push_back(eval(simplex[0]));
	for (Eigen::Index i = 0; i < n; ++i) {
		Eigen::VectorXd v = simplex[0];
		const double step = v[i] != 0.0 ? opt.initial_step * std::max(std::abs(v[i]), 0.1) : opt.initial_step;
		v[i] += step;
		v = project(v, opt);
		if (v[i] == simplex[0][i]) {
			v[i] -= 2 * step;
			v = project(v, opt);
		}
		simplex.push_back(v);
		values.push_back(eval(v));
	}

	std::vector<std::size_t> order(simplex.size());
	bool converged = false;
	while (evals < opt.max_evaluations) {
		std::iota(order.begin(), order.end(), 0);
		std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
		const std::size_t best = order.front();
		const std::size_t worst = order.back();
		const std::size_t second = order[order.size() - 2];

		double diameter = 0.0;
		for (const auto &v : simplex) {
			diameter = std::max(diameter, (v - simplex[best]).cwiseAbs().maxCoeff());
		}
		const double spread = values[worst] - values[best];
		if (spread <= opt.ftol * (std::abs(values[best]) + opt.ftol) && diameter <= opt.xtol * (1.0 + simplex[best].cwiseAbs().maxCoeff())) {
			converged = true;
			break;
		}
		if (diameter == 0.0) {
			converged = true;
			break;
		}

		Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
		for (std::size_t i = 0; i < simplex.size(); ++i) {
			if (i != worst) {
				centroid += simplex[i];
			}
		}
		centroid /= double(n);

		const Eigen::VectorXd reflected = project(centroid + (centroid - simplex[worst]), opt);
		const double fr = eval(reflected);
		if (fr < values[best]) {
			const Eigen::VectorXd expanded = project(centroid + 2.0 * (centroid - simplex[worst]), opt);
			const double fe = eval(expanded);
			if (fe < fr) {
				simplex[worst] = expanded;
				values[worst] = fe;
			} else {
				simplex[worst] = reflected;
				values[worst] = fr;
			}
			continue;
		}
		if (fr < values[second]) {
			simplex[worst] = reflected;
			values[worst] = fr;
			continue;
		}
		const bool outside = fr < values[worst];
		const Eigen::VectorXd contracted = outside ? project(centroid + 0.5 * (reflected - centroid), opt)
		                                           : project(centroid + 0.5 * (simplex[worst] - centroid), opt);
		const double fc = eval(contracted);
		if (fc < (outside ? fr : values[worst])) {
			simplex[worst] = contracted;
			values[worst] = fc;
			continue;
		}
		for (std::size_t i = 0; i < simplex.size(); ++i) {
			if (i != best) {
				simplex[i] = project(simplex[best] + 0.5 * (simplex[i] - simplex[best]), opt);
				values[i] = eval(simplex[i]);
			}
		}
	}

	const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
	result.x = simplex[best];
	result.value = values[best];
	result.evaluations = evals;
	result.converged = converged;
	return result;
}

NelderMeadResult minimize(const Objective &f, const Eigen::VectorXd &start, const NelderMeadOptions &options,
                          int restarts) {
	NelderMeadResult best = nelder_mead(f, start, options);
	int total = best.evaluations;
	for (int r = 0; r < restarts; ++r) {
		NelderMeadResult next = nelder_mead(f, best.x, options);
		total += next.evaluations;
		const bool same = std::abs(next.value - best.value) <= options.ftol * (std::abs(best.value) + options.ftol);
		if (next.value <= best.value) {
			best = std::move(next);
		}
		if (same && best.converged) {
			break;
		}
	}
	best.evaluations = total;
	return best;
}

} // namespace epiforecast::optimize
