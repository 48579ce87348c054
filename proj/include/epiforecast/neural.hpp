#pragma once

#include "epiforecast/series.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <utility>
#include <vector>

namespace epiforecast::neural {

/// Lag-embedded regression set: row t holds [r_{t-1}, ..., r_{t-n}], target r_t.
struct Dataset {
	Eigen::MatrixXd inputs;
	Eigen::VectorXd targets;
};

/// Rows for every t in [lags, size).
Dataset lag_embed(const Eigen::VectorXd &values, int lags);

/// Full-batch Adam with fixed moment decay rates.
struct Adam {
	double learning_rate = 0.01;
	double beta1 = 0.9;
	double beta2 = 0.999;
	double epsilon = 1e-8;
	Eigen::VectorXd m;
	Eigen::VectorXd v;
	long step_count = 0;

	void step(Eigen::VectorXd &params, const Eigen::VectorXd &grad);
};

struct GradCheckReport {
	double max_relative = 0.0;
	double max_absolute = 0.0;
};

/// Relative discrepancies use max(|analytic|, |numeric|, 1e-6) as denominator
/// so parameters with vanishing gradient are judged on absolute error.
inline constexpr double kGradCheckFloor = 1e-6;

// ---------------------------------------------------------------------------
// NARNN: one tanh hidden layer, linear output, inputs are the last n values.

struct NarnnConfig {
	int lags = 5;
	int hidden = 10;
	int epochs = 500;
	double learning_rate = 0.01;
	std::uint64_t seed = 42;
	int restarts = 5;
	/// Candidate lag counts for select_lags.
	std::vector<int> lag_candidates{3, 5, 7};
	/// Trailing training targets held out when choosing the lag count.
	int validation_len = 10;
};

struct NarnnModel {
	Eigen::MatrixXd w_hidden;  ///< hidden x lags
	Eigen::VectorXd b_hidden;  ///< hidden
	Eigen::VectorXd w_out;     ///< hidden
	double b_out = 0.0;
	SymmetricScaleState scale;
	NarnnConfig config;
	/// Ensemble loss on the training set.
	double final_loss = 0.0;
	/// Loss curve of the first restart.
	std::vector<double> loss_curve;
	/// Networks from restarts 2..R. Outputs average this network and all
	/// members; flatten() and the gradient cover this network only.
	std::vector<NarnnModel> members;

	int lags() const { return static_cast<int>(w_hidden.cols()); }
	int hidden() const { return static_cast<int>(w_hidden.rows()); }
	Eigen::Index parameter_count() const { return w_hidden.size() + 2 * w_hidden.rows() + 1; }
	Eigen::VectorXd flatten() const;
	void assign(const Eigen::VectorXd &flat);
};

/// Uniform +/- sqrt(6 / (fan_in + fan_out)) weights, zero biases.
NarnnModel narnn_init(int lags, int hidden, std::uint64_t seed);

/// Ensemble output for one scaled input row ordered newest lag first.
double narnn_forward(const NarnnModel &model, const Eigen::Ref<const Eigen::VectorXd> &input);
Eigen::VectorXd narnn_predict(const NarnnModel &model, const Eigen::MatrixXd &inputs);
double narnn_loss(const NarnnModel &model, const Dataset &data);
/// Mean squared error and its gradient in flatten() order.
std::pair<double, Eigen::VectorXd> narnn_gradient(const NarnnModel &model, const Dataset &data);

/// Trains `config.restarts` networks on an already scaled dataset and returns
/// their averaging ensemble.
NarnnModel narnn_train(const Dataset &data, int lags, const NarnnConfig &config);

/// Scales the residuals to [-1, 1] by their max |value|, embeds `config.lags`
/// lags and trains the restart ensemble.
NarnnModel narnn_fit(const TimeSeries &residuals, const NarnnConfig &config);

/// Lag count from `config.lag_candidates` with the lowest one-step MSE on the
/// last `validation_len` targets; ties go to fewer lags.
int select_lags(const TimeSeries &residuals, const NarnnConfig &config);

/// Closed-loop forecast. `seed_window` holds the last n values on the
/// original scale in chronological order.
Eigen::VectorXd narnn_forecast(const NarnnModel &model, const Eigen::VectorXd &seed_window, int h);

GradCheckReport grad_check(const NarnnModel &model, const Dataset &data, double eps);

// ---------------------------------------------------------------------------
// LSTM: single layer, gates act on the concatenation [h_{t-1}, x_t].

struct LstmConfig {
	int window = 5;
	int hidden = 16;
	int epochs = 300;
	double learning_rate = 0.01;
	std::uint64_t seed = 42;
};

struct LstmWeights {
	Eigen::MatrixXd w_f, w_i, w_c, w_o;  ///< hidden x (hidden + input)
	Eigen::VectorXd b_f, b_i, b_c, b_o;
	Eigen::VectorXd w_out;
	double b_out = 0.0;

	int hidden() const { return static_cast<int>(w_f.rows()); }
	int input_size() const { return static_cast<int>(w_f.cols() - w_f.rows()); }
	Eigen::Index parameter_count() const { return 4 * (w_f.size() + w_f.rows()) + w_out.size() + 1; }
	Eigen::VectorXd flatten() const;
	void assign(const Eigen::VectorXd &flat);
};

struct LstmModel {
	LstmWeights weights;
	ScaleState scale;
	LstmConfig config;
	double final_loss = 0.0;
	std::vector<double> loss_curve;
	/// Final scaled training window, oldest first.
	Eigen::VectorXd last_window;
	/// RMS of in-sample one-step errors on the original scale.
	double sigma = 0.0;
	Date last_date;
};

struct CellState {
	Eigen::VectorXd h;
	Eigen::VectorXd c;
};

/// Gate activations of one step; exposed for inspection and tests.
struct CellTrace {
	Eigen::VectorXd f, i, c_tilde, o;
	CellState out;
};

CellTrace lstm_step(const Eigen::VectorXd &x, const Eigen::VectorXd &h_prev, const Eigen::VectorXd &c_prev,
                    const LstmWeights &weights);
CellState lstm_cell(const Eigen::VectorXd &x, const Eigen::VectorXd &h_prev, const Eigen::VectorXd &c_prev,
                    const LstmWeights &weights);

LstmWeights lstm_init(int input_size, int hidden, std::uint64_t seed);

/// Runs a scaled window (oldest first) from zero state; returns the output.
double lstm_forward(const LstmWeights &weights, const Eigen::Ref<const Eigen::VectorXd> &window);
double lstm_loss(const LstmWeights &weights, const Dataset &data);
/// Backpropagation through time; gradient in flatten() order.
std::pair<double, Eigen::VectorXd> lstm_gradient(const LstmWeights &weights, const Dataset &data);

/// Sliding windows in chronological order: row i = values[i .. i+window).
Dataset window_embed(const Eigen::VectorXd &values, int window);

LstmModel lstm_fit(const TimeSeries &series, const LstmConfig &config);
ForecastResult lstm_forecast(const LstmModel &model, int h);

GradCheckReport grad_check(const LstmWeights &weights, const Dataset &data, double eps);

} // namespace epiforecast::neural
