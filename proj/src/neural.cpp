#include "epiforecast/neural.hpp"

#include "epiforecast/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace epiforecast::neural {

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::VectorXd sigmoid(const Eigen::VectorXd &x) {
	return x.unaryExpr([](double v) { return sigmoid(v); });
}

Eigen::VectorXd tanh_v(const Eigen::VectorXd &x) { return x.array().tanh().matrix(); }

void fill_uniform(Eigen::Ref<Eigen::MatrixXd> target, double limit, std::mt19937_64 &rng) {
	std::uniform_real_distribution<double> dist(-limit, limit);
	for (Eigen::Index c = 0; c < target.cols(); ++c) {
		for (Eigen::Index r = 0; r < target.rows(); ++r) {
			target(r, c) = dist(rng);
		}
	}
}

double glorot(Eigen::Index fan_in, Eigen::Index fan_out) {
	return std::sqrt(6.0 / double(fan_in + fan_out));
}

/// Copies `m` into flat[k ..) column-major and advances k.
void put(Eigen::VectorXd &flat, Eigen::Index &k, const Eigen::MatrixXd &m) {
	flat.segment(k, m.size()) = Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
	k += m.size();
}

void take(const Eigen::VectorXd &flat, Eigen::Index &k, Eigen::MatrixXd &m) {
	m = Eigen::Map<const Eigen::MatrixXd>(flat.data() + k, m.rows(), m.cols());
	k += m.size();
}

void take(const Eigen::VectorXd &flat, Eigen::Index &k, Eigen::VectorXd &v) {
	v = flat.segment(k, v.size());
	k += v.size();
}

void check_finite(double loss, const char *what) {
	if (!std::isfinite(loss)) {
		throw Error(ErrorKind::DivergenceError,
		            std::string(what) + " training loss became non-finite; try a lower learning rate");
	}
}

template <typename Model, typename LossGrad>
GradCheckReport finite_difference_check(const Model &model, double eps, LossGrad &&loss_and_grad) {
	if (!(eps >= 1e-7 && eps <= 1e-4)) {
		throw Error(ErrorKind::InvalidArgument, "finite-difference step must lie in [1e-7, 1e-4]");
	}
	const auto [loss, analytic] = loss_and_grad(model);
	(void)loss;
	Eigen::VectorXd flat = model.flatten();
	Model probe = model;
	GradCheckReport report;
	for (Eigen::Index k = 0; k < flat.size(); ++k) {
		const double saved = flat[k];
		flat[k] = saved + eps;
		probe.assign(flat);
		const double up = loss_and_grad(probe).first;
		flat[k] = saved - eps;
		probe.assign(flat);
		const double down = loss_and_grad(probe).first;
		flat[k] = saved;
		const double numeric = (up - down) / (2.0 * eps);
		const double abs_err = std::abs(analytic[k] - numeric);
		const double denom = std::max({std::abs(analytic[k]), std::abs(numeric), kGradCheckFloor});
		report.max_absolute = std::max(report.max_absolute, abs_err);
		report.max_relative = std::max(report.max_relative, abs_err / denom);
	}
	return report;
}

} // namespace

Dataset lag_embed(const Eigen::VectorXd &values, int lags) {
	if (lags < 1) {
		throw Error(ErrorKind::InvalidArgument, "lag count must be >= 1");
	}
	const Eigen::Index rows = values.size() - lags;
	if (rows < 1) {
		throw Error(ErrorKind::InsufficientData, "need more than " + std::to_string(lags) + " values to embed lags");
	}
	Dataset data{Eigen::MatrixXd(rows, lags), values.tail(rows)};
	for (Eigen::Index r = 0; r < rows; ++r) {
		const Eigen::Index t = r + lags;
		for (int j = 0; j < lags; ++j) {
			data.inputs(r, j) = values[t - 1 - j];
		}
	}
	return data;
}

Dataset window_embed(const Eigen::VectorXd &values, int window) {
	if (window < 1) {
		throw Error(ErrorKind::InvalidArgument, "window length must be >= 1");
	}
	const Eigen::Index rows = values.size() - window;
	if (rows < 1) {
		throw Error(ErrorKind::InsufficientData, "need more than " + std::to_string(window) + " values for one window");
	}
	Dataset data{Eigen::MatrixXd(rows, window), values.tail(rows)};
	for (Eigen::Index r = 0; r < rows; ++r) {
		data.inputs.row(r) = values.segment(r, window).transpose();
	}
	return data;
}

void Adam::step(Eigen::VectorXd &params, const Eigen::VectorXd &grad) {
	if (m.size() != params.size()) {
		m = Eigen::VectorXd::Zero(params.size());
		v = Eigen::VectorXd::Zero(params.size());
		step_count = 0;
	}
	++step_count;
	m = beta1 * m + (1.0 - beta1) * grad;
	v = beta2 * v + (1.0 - beta2) * grad.cwiseProduct(grad);
	const double c1 = 1.0 - std::pow(beta1, double(step_count));
	const double c2 = 1.0 - std::pow(beta2, double(step_count));
	params.array() -= learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + epsilon);
}

// ---------------------------------------------------------------------------
// NARNN

Eigen::VectorXd NarnnModel::flatten() const {
	Eigen::VectorXd flat(parameter_count());
	Eigen::Index k = 0;
	put(flat, k, w_hidden);
	put(flat, k, b_hidden);
	put(flat, k, w_out);
	flat[k] = b_out;
	return flat;
}

void NarnnModel::assign(const Eigen::VectorXd &flat) {
	if (flat.size() != parameter_count()) {
		throw Error(ErrorKind::ShapeError, "NARNN parameter vector has the wrong length");
	}
	Eigen::Index k = 0;
	take(flat, k, w_hidden);
	take(flat, k, b_hidden);
	take(flat, k, w_out);
	b_out = flat[k];
}

NarnnModel narnn_init(int lags, int hidden, std::uint64_t seed) {
	if (lags < 1 || hidden < 1) {
		throw Error(ErrorKind::InvalidArgument, "NARNN needs lags >= 1 and hidden >= 1");
	}
	std::mt19937_64 rng(seed);
	NarnnModel model;
	model.w_hidden.resize(hidden, lags);
	fill_uniform(model.w_hidden, glorot(lags, hidden), rng);
	model.b_hidden = Eigen::VectorXd::Zero(hidden);
	model.w_out.resize(hidden);
	fill_uniform(model.w_out, glorot(hidden, 1), rng);
	model.b_out = 0.0;
	return model;
}

namespace {

double single_forward(const NarnnModel &net, const Eigen::Ref<const Eigen::VectorXd> &input) {
	const Eigen::VectorXd hidden = tanh_v(net.w_hidden * input + net.b_hidden);
	return net.w_out.dot(hidden) + net.b_out;
}

Eigen::VectorXd single_predict(const NarnnModel &net, const Eigen::MatrixXd &inputs) {
	const Eigen::MatrixXd act = ((inputs * net.w_hidden.transpose()).rowwise() + net.b_hidden.transpose()).array().tanh();
	return (act * net.w_out).array() + net.b_out;
}

} // namespace

double narnn_forward(const NarnnModel &model, const Eigen::Ref<const Eigen::VectorXd> &input) {
	if (input.size() != model.lags()) {
		throw Error(ErrorKind::ShapeError, "NARNN expects " + std::to_string(model.lags()) + " inputs, got " +
		                                       std::to_string(input.size()));
	}
	double sum = single_forward(model, input);
	for (const auto &m : model.members) {
		sum += single_forward(m, input);
	}
	return sum / double(model.members.size() + 1);
}

Eigen::VectorXd narnn_predict(const NarnnModel &model, const Eigen::MatrixXd &inputs) {
	if (inputs.cols() != model.lags()) {
		throw Error(ErrorKind::ShapeError, "NARNN input width mismatch");
	}
	Eigen::VectorXd sum = single_predict(model, inputs);
	for (const auto &m : model.members) {
		sum += single_predict(m, inputs);
	}
	return sum / double(model.members.size() + 1);
}

double narnn_loss(const NarnnModel &model, const Dataset &data) {
	return (narnn_predict(model, data.inputs) - data.targets).squaredNorm() / double(data.targets.size());
}

std::pair<double, Eigen::VectorXd> narnn_gradient(const NarnnModel &model, const Dataset &data) {
	const double n = double(data.targets.size());
	const Eigen::MatrixXd act =
	    ((data.inputs * model.w_hidden.transpose()).rowwise() + model.b_hidden.transpose()).array().tanh();
	const Eigen::VectorXd out = (act * model.w_out).array() + model.b_out;
	const Eigen::VectorXd err = out - data.targets;
	const double loss = err.squaredNorm() / n;

	const Eigen::VectorXd d_out = 2.0 * err / n;
	const Eigen::MatrixXd d_pre = (d_out * model.w_out.transpose()).array() * (1.0 - act.array().square());

	NarnnModel grad = model;
	grad.w_hidden = d_pre.transpose() * data.inputs;
	grad.b_hidden = d_pre.colwise().sum().transpose();
	grad.w_out = act.transpose() * d_out;
	grad.b_out = d_out.sum();
	return {loss, grad.flatten()};
}

NarnnModel narnn_train(const Dataset &data, int lags, const NarnnConfig &config) {
	if (config.hidden < 1 || config.restarts < 1 || config.epochs < 1) {
		throw Error(ErrorKind::InvalidArgument, "NARNN needs hidden, restarts and epochs >= 1");
	}
	NarnnModel ensemble;
	for (int r = 0; r < config.restarts; ++r) {
		NarnnModel model = narnn_init(lags, config.hidden, derive_seed(config.seed, std::uint64_t(r) + 1));
		Eigen::VectorXd params = model.flatten();
		Adam adam;
		adam.learning_rate = config.learning_rate;
		model.loss_curve.reserve(std::size_t(config.epochs));
		for (int epoch = 0; epoch < config.epochs; ++epoch) {
			model.assign(params);
			const auto [loss, grad] = narnn_gradient(model, data);
			check_finite(loss, "NARNN");
			model.loss_curve.push_back(loss);
			adam.step(params, grad);
		}
		model.assign(params);
		check_finite(narnn_loss(model, data), "NARNN");
		if (r == 0) {
			ensemble = std::move(model);
		} else {
			model.loss_curve.clear();
			ensemble.members.push_back(std::move(model));
		}
	}
	ensemble.config = config;
	ensemble.config.lags = lags;
	ensemble.final_loss = narnn_loss(ensemble, data);
	return ensemble;
}

NarnnModel narnn_fit(const TimeSeries &residuals, const NarnnConfig &config) {
	if (config.lags < 1) {
		throw Error(ErrorKind::InvalidArgument, "NARNN needs lags >= 1");
	}
	if (residuals.size() <= config.lags + 10) {
		throw Error(ErrorKind::InsufficientData, "NARNN with " + std::to_string(config.lags) + " lags needs more than " +
		                                             std::to_string(config.lags + 10) + " residuals, got " +
		                                             std::to_string(residuals.size()));
	}
	const SymmetricScaleState scale = fit_symmetric_scale(residuals.values());
	const Eigen::VectorXd scaled = residuals.values() / scale.maxabs;
	NarnnModel model = narnn_train(lag_embed(scaled, config.lags), config.lags, config);
	model.scale = scale;
	return model;
}

int select_lags(const TimeSeries &residuals, const NarnnConfig &config) {
	if (config.lag_candidates.empty()) {
		return config.lags;
	}
	const SymmetricScaleState scale = fit_symmetric_scale(residuals.values());
	const Eigen::VectorXd scaled = residuals.values() / scale.maxabs;
	const Eigen::Index n = scaled.size();
	int best = -1;
	double best_mse = std::numeric_limits<double>::infinity();
	for (const int lags : config.lag_candidates) {
		// Training rows must end before the validation targets begin.
		if (n - config.validation_len <= lags + 10) {
			continue;
		}
		const Dataset train = lag_embed(scaled.head(n - config.validation_len), lags);
		const Dataset all = lag_embed(scaled, lags);
		const Eigen::Index rows = all.targets.size();
		const NarnnModel model = narnn_train(train, lags, config);
		const Eigen::VectorXd pred = narnn_predict(model, all.inputs.bottomRows(config.validation_len));
		const double mse = (pred - all.targets.tail(config.validation_len)).squaredNorm() / config.validation_len;
		(void)rows;
		if (mse < best_mse || (mse == best_mse && lags < best)) {
			best = lags;
			best_mse = mse;
		}
	}
	if (best < 0) {
		throw Error(ErrorKind::InsufficientData, "residual series of length " + std::to_string(n) +
		                                             " is too short for any candidate lag count");
	}
	return best;
}

Eigen::VectorXd narnn_forecast(const NarnnModel &model, const Eigen::VectorXd &seed_window, int h) {
	if (seed_window.size() != model.lags()) {
		throw Error(ErrorKind::ShapeError, "seed window has " + std::to_string(seed_window.size()) + " values, model uses " +
		                                       std::to_string(model.lags()) + " lags");
	}
	if (h < 1) {
		throw Error(ErrorKind::InvalidArgument, "forecast horizon must be >= 1");
	}
	std::vector<double> history(seed_window.data(), seed_window.data() + seed_window.size());
	for (double &v : history) {
		v /= model.scale.maxabs;
	}
	const int lags = model.lags();
	Eigen::VectorXd input(lags);
	Eigen::VectorXd out(h);
	for (int k = 0; k < h; ++k) {
		for (int j = 0; j < lags; ++j) {
			input[j] = history[history.size() - 1 - static_cast<std::size_t>(j)];
		}
		const double next = narnn_forward(model, input);
		history.push_back(next);
		out[k] = next * model.scale.maxabs;
	}
	return out;
}

GradCheckReport grad_check(const NarnnModel &model, const Dataset &data, double eps) {
	return finite_difference_check(model, eps, [&](const NarnnModel &m) { return narnn_gradient(m, data); });
}

// ---------------------------------------------------------------------------
// LSTM

Eigen::VectorXd LstmWeights::flatten() const {
	Eigen::VectorXd flat(parameter_count());
	Eigen::Index k = 0;
	for (const auto *w : {&w_f, &w_i, &w_c, &w_o}) {
		put(flat, k, *w);
	}
	for (const auto *b : {&b_f, &b_i, &b_c, &b_o}) {
		put(flat, k, *b);
	}
	put(flat, k, w_out);
	flat[k] = b_out;
	return flat;
}

void LstmWeights::assign(const Eigen::VectorXd &flat) {
	if (flat.size() != parameter_count()) {
		throw Error(ErrorKind::ShapeError, "LSTM parameter vector has the wrong length");
	}
	Eigen::Index k = 0;
	for (auto *w : {&w_f, &w_i, &w_c, &w_o}) {
		take(flat, k, *w);
	}
	for (auto *b : {&b_f, &b_i, &b_c, &b_o}) {
		take(flat, k, *b);
	}
	take(flat, k, w_out);
	b_out = flat[k];
}

LstmWeights lstm_init(int input_size, int hidden, std::uint64_t seed) {
	if (input_size < 1 || hidden < 1) {
		throw Error(ErrorKind::InvalidArgument, "LSTM needs input and hidden sizes >= 1");
	}
	std::mt19937_64 rng(seed);
	LstmWeights w;
	const Eigen::Index cols = hidden + input_size;
	for (auto *m : {&w.w_f, &w.w_i, &w.w_c, &w.w_o}) {
		m->resize(hidden, cols);
		fill_uniform(*m, glorot(cols, hidden), rng);
	}
	for (auto *b : {&w.b_f, &w.b_i, &w.b_c, &w.b_o}) {
		*b = Eigen::VectorXd::Zero(hidden);
	}
	w.w_out.resize(hidden);
	fill_uniform(w.w_out, glorot(hidden, 1), rng);
	w.b_out = 0.0;
	return w;
}

CellTrace lstm_step(const Eigen::VectorXd &x, const Eigen::VectorXd &h_prev, const Eigen::VectorXd &c_prev,
                    const LstmWeights &weights) {
	const Eigen::Index hidden = weights.hidden();
	if (h_prev.size() != hidden || c_prev.size() != hidden || x.size() != weights.input_size()) {
		throw Error(ErrorKind::ShapeError, "LSTM cell expects hidden " + std::to_string(hidden) + " and input " +
		                                       std::to_string(weights.input_size()) + "; got h " +
		                                       std::to_string(h_prev.size()) + ", c " + std::to_string(c_prev.size()) +
		                                       ", x " + std::to_string(x.size()));
	}
	Eigen::VectorXd z(h_prev.size() + x.size());
	z << h_prev, x;
	CellTrace t;
	t.f = sigmoid(weights.w_f * z + weights.b_f);
	t.i = sigmoid(weights.w_i * z + weights.b_i);
	t.c_tilde = tanh_v(weights.w_c * z + weights.b_c);
	t.out.c = t.f.cwiseProduct(c_prev) + t.i.cwiseProduct(t.c_tilde);
	t.o = sigmoid(weights.w_o * z + weights.b_o);
	t.out.h = t.o.cwiseProduct(tanh_v(t.out.c));
	return t;
}

CellState lstm_cell(const Eigen::VectorXd &x, const Eigen::VectorXd &h_prev, const Eigen::VectorXd &c_prev,
                    const LstmWeights &weights) {
	return lstm_step(x, h_prev, c_prev, weights).out;
}

double lstm_forward(const LstmWeights &weights, const Eigen::Ref<const Eigen::VectorXd> &window) {
	const Eigen::Index hidden = weights.hidden();
	Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
	Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden);
	Eigen::VectorXd x(1);
	for (Eigen::Index t = 0; t < window.size(); ++t) {
		x[0] = window[t];
		CellState s = lstm_cell(x, h, c, weights);
		h = std::move(s.h);
		c = std::move(s.c);
	}
	return weights.w_out.dot(h) + weights.b_out;
}

double lstm_loss(const LstmWeights &weights, const Dataset &data) {
	double sum = 0.0;
	for (Eigen::Index r = 0; r < data.inputs.rows(); ++r) {
		const double err = lstm_forward(weights, data.inputs.row(r).transpose()) - data.targets[r];
		sum += err * err;
	}
	return sum / double(data.targets.size());
}

std::pair<double, Eigen::VectorXd> lstm_gradient(const LstmWeights &weights, const Dataset &data) {
	const Eigen::Index hidden = weights.hidden();
	const Eigen::Index steps = data.inputs.cols();
	const double n = double(data.targets.size());

	LstmWeights grad = weights;
	for (auto *m : {&grad.w_f, &grad.w_i, &grad.w_c, &grad.w_o}) {
		m->setZero();
	}
	for (auto *b : {&grad.b_f, &grad.b_i, &grad.b_c, &grad.b_o}) {
		b->setZero();
	}
	grad.w_out.setZero();
	grad.b_out = 0.0;

	double loss = 0.0;
	std::vector<CellTrace> trace(static_cast<std::size_t>(steps));
	std::vector<Eigen::VectorXd> inputs(static_cast<std::size_t>(steps));
	Eigen::VectorXd x(1);
	for (Eigen::Index r = 0; r < data.inputs.rows(); ++r) {
		Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden);
		Eigen::VectorXd c = Eigen::VectorXd::Zero(hidden);
		for (Eigen::Index t = 0; t < steps; ++t) {
			x[0] = data.inputs(r, t);
			Eigen::VectorXd z(hidden + 1);
			z << h, x;
			inputs[std::size_t(t)] = z;
			trace[std::size_t(t)] = lstm_step(x, h, c, weights);
			h = trace[std::size_t(t)].out.h;
			c = trace[std::size_t(t)].out.c;
		}
		const double err = weights.w_out.dot(h) + weights.b_out - data.targets[r];
		loss += err * err;

		const double d_y = 2.0 * err / n;
		grad.w_out += d_y * h;
		grad.b_out += d_y;
		Eigen::VectorXd d_h = d_y * weights.w_out;
		Eigen::VectorXd d_c = Eigen::VectorXd::Zero(hidden);
		for (Eigen::Index t = steps - 1; t >= 0; --t) {
			const CellTrace &s = trace[std::size_t(t)];
			const Eigen::VectorXd c_prev = t > 0 ? trace[std::size_t(t - 1)].out.c : Eigen::VectorXd::Zero(hidden);
			const Eigen::VectorXd tanh_c = tanh_v(s.out.c);
			const Eigen::VectorXd d_o = d_h.cwiseProduct(tanh_c);
			d_c += d_h.cwiseProduct(s.o).cwiseProduct((1.0 - tanh_c.array().square()).matrix());
			const Eigen::VectorXd d_f = d_c.cwiseProduct(c_prev);
			const Eigen::VectorXd d_i = d_c.cwiseProduct(s.c_tilde);
			const Eigen::VectorXd d_ct = d_c.cwiseProduct(s.i);

			const Eigen::VectorXd a_f = d_f.array() * s.f.array() * (1.0 - s.f.array());
			const Eigen::VectorXd a_i = d_i.array() * s.i.array() * (1.0 - s.i.array());
			const Eigen::VectorXd a_o = d_o.array() * s.o.array() * (1.0 - s.o.array());
			const Eigen::VectorXd a_c = d_ct.array() * (1.0 - s.c_tilde.array().square());

			const Eigen::VectorXd &z = inputs[std::size_t(t)];
			grad.w_f += a_f * z.transpose();
			grad.w_i += a_i * z.transpose();
			grad.w_c += a_c * z.transpose();
			grad.w_o += a_o * z.transpose();
			grad.b_f += a_f;
			grad.b_i += a_i;
			grad.b_c += a_c;
			grad.b_o += a_o;

			const Eigen::VectorXd d_z = weights.w_f.transpose() * a_f + weights.w_i.transpose() * a_i +
			                            weights.w_c.transpose() * a_c + weights.w_o.transpose() * a_o;
			d_h = d_z.head(hidden);
			d_c = d_c.cwiseProduct(s.f);
		}
	}
	return {loss / n, grad.flatten()};
}

LstmModel lstm_fit(const TimeSeries &series, const LstmConfig &config) {
	if (config.window < 1 || config.hidden < 1 || config.epochs < 1) {
		throw Error(ErrorKind::InvalidArgument, "LSTM needs window, hidden and epochs >= 1");
	}
	if (series.size() <= config.window + 10) {
		throw Error(ErrorKind::InsufficientData, "LSTM with window " + std::to_string(config.window) +
		                                             " needs more than " + std::to_string(config.window + 10) +
		                                             " points, got " + std::to_string(series.size()));
	}
	auto [scaled, scale] = minmax_scale(series);
	const Dataset data = window_embed(scaled.values(), config.window);

	LstmModel model;
	model.config = config;
	model.scale = scale;
	model.weights = lstm_init(1, config.hidden, config.seed);
	Eigen::VectorXd params = model.weights.flatten();
	Adam adam;
	adam.learning_rate = config.learning_rate;
	model.loss_curve.reserve(std::size_t(config.epochs));
	for (int epoch = 0; epoch < config.epochs; ++epoch) {
		model.weights.assign(params);
		const auto [loss, grad] = lstm_gradient(model.weights, data);
		check_finite(loss, "LSTM");
		model.loss_curve.push_back(loss);
		adam.step(params, grad);
	}
	model.weights.assign(params);
	model.final_loss = lstm_loss(model.weights, data);
	check_finite(model.final_loss, "LSTM");

	double sse = 0.0;
	for (Eigen::Index r = 0; r < data.inputs.rows(); ++r) {
		const double pred = lstm_forward(model.weights, data.inputs.row(r).transpose());
		const double err = (pred - data.targets[r]) * (scale.max - scale.min);
		sse += err * err;
	}
	model.sigma = std::sqrt(sse / double(data.inputs.rows()));
	model.last_window = scaled.values().tail(config.window);
	model.last_date = series.end();
	return model;
}

ForecastResult lstm_forecast(const LstmModel &model, int h) {
	if (h < 1) {
		throw Error(ErrorKind::InvalidArgument, "forecast horizon must be >= 1");
	}
	Eigen::VectorXd window = model.last_window;
	const Eigen::Index w = window.size();
	Eigen::VectorXd scaled(h);
	for (int k = 0; k < h; ++k) {
		const double next = lstm_forward(model.weights, window);
		scaled[k] = next;
		if (w > 1) {
			window.head(w - 1) = window.tail(w - 1).eval();
		}
		window[w - 1] = next;
	}
	ForecastResult out;
	out.model = "LSTM";
	out.start = model.last_date + std::chrono::days(1);
	out.point = undo_scale(scaled, model.scale);
	out.lower.resize(h);
	out.upper.resize(h);
	for (int k = 1; k <= h; ++k) {
		const double half = kZ90 * model.sigma * std::sqrt(double(k));
		out.lower[k - 1] = out.point[k - 1] - half;
		out.upper[k - 1] = out.point[k - 1] + half;
	}
	return out;
}

GradCheckReport grad_check(const LstmWeights &weights, const Dataset &data, double eps) {
	return finite_difference_check(weights, eps, [&](const LstmWeights &w) { return lstm_gradient(w, data); });
}

} // namespace epiforecast::neural
