#include "epiforecast/serialize.hpp"

#include "serialize_detail.hpp"

namespace epiforecast::serialize {

using detail::ordered_json;

namespace {

ordered_json vec(const Eigen::VectorXd &v) { return std::vector<double>(v.data(), v.data() + v.size()); }

/// Row-major weights with explicit shape.
ordered_json mat(const Eigen::MatrixXd &m) {
	ordered_json data = ordered_json::array();
	for (Eigen::Index r = 0; r < m.rows(); ++r) {
		for (Eigen::Index c = 0; c < m.cols(); ++c) {
			data.push_back(m(r, c));
		}
	}
	return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

ordered_json series(const TimeSeries &s) {
	return {{"name", s.name()}, {"start", format_iso_date(s.start())}, {"values", vec(s.values())}};
}

Eigen::VectorXd read_vec(const ordered_json &j) {
	const auto values = j.get<std::vector<double>>();
	return Eigen::Map<const Eigen::VectorXd>(values.data(), Eigen::Index(values.size()));
}

Eigen::MatrixXd read_mat(const ordered_json &j) {
	const auto rows = j.at("rows").get<Eigen::Index>();
	const auto cols = j.at("cols").get<Eigen::Index>();
	const auto data = j.at("data").get<std::vector<double>>();
	if (Eigen::Index(data.size()) != rows * cols) {
		throw Error(ErrorKind::FormatError, "matrix data does not match its declared shape");
	}
	Eigen::MatrixXd m(rows, cols);
	for (Eigen::Index r = 0; r < rows; ++r) {
		for (Eigen::Index c = 0; c < cols; ++c) {
			m(r, c) = data[std::size_t(r * cols + c)];
		}
	}
	return m;
}

TimeSeries read_series(const ordered_json &j) {
	return TimeSeries(j.at("name").get<std::string>(), parse_iso_date(j.at("start").get<std::string>()),
	                  read_vec(j.at("values")));
}

ordered_json order_json(const arima::ArimaOrder &o) { return {{"p", o.p}, {"d", o.d}, {"q", o.q}}; }

ordered_json arima_doc(const arima::ArimaModel &m) {
	return {{"kind", "arima"},
	        {"order", order_json(m.order)},
	        {"phi", vec(m.params.phi)},
	        {"theta", vec(m.params.theta)},
	        {"intercept", m.params.intercept},
	        {"sigma2", m.params.sigma2},
	        {"has_intercept", m.has_intercept},
	        {"diff_order", m.diff_state.order},
	        {"diff_seeds", m.diff_state.seeds},
	        {"fitted", series(m.fitted)},
	        {"residuals", series(m.residuals)},
	        {"train_tail", m.train_tail},
	        {"innovation_tail", m.innovation_tail},
	        {"css", m.css},
	        {"aicc", m.aicc},
	        {"n_obs", m.n_obs},
	        {"stationary", m.stationary},
	        {"converged", m.converged}};
}

arima::ArimaModel arima_read(const ordered_json &j) {
	arima::ArimaModel m{
	    {j.at("order").at("p").get<int>(), j.at("order").at("d").get<int>(), j.at("order").at("q").get<int>()},
	    {read_vec(j.at("phi")), read_vec(j.at("theta")), j.at("intercept").get<double>(), j.at("sigma2").get<double>()},
	    j.at("has_intercept").get<bool>(),
	    {j.at("diff_order").get<int>(), j.at("diff_seeds").get<std::vector<double>>()},
	    read_series(j.at("fitted")),
	    read_series(j.at("residuals")),
	    j.at("train_tail").get<std::vector<double>>(),
	    j.at("innovation_tail").get<std::vector<double>>(),
	    j.at("css").get<double>(),
	    j.at("aicc").get<double>(),
	    j.at("n_obs").get<Eigen::Index>(),
	    j.at("stationary").get<bool>(),
	    j.at("converged").get<bool>()};
	const auto tail_len = static_cast<std::size_t>(std::max(m.order.p, m.order.q) + m.order.d);
	if (m.params.phi.size() != m.order.p || m.params.theta.size() != m.order.q || m.train_tail.size() != tail_len ||
	    m.innovation_tail.size() != static_cast<std::size_t>(m.order.q)) {
		throw Error(ErrorKind::FormatError, "arima document: coefficient or tail lengths disagree with the order");
	}
	return m;
}

neural::NarnnConfig narnn_config_read(const ordered_json &j) {
	neural::NarnnConfig c;
	c.lags = j.at("lags").get<int>();
	c.hidden = j.at("hidden").get<int>();
	c.epochs = j.at("epochs").get<int>();
	c.learning_rate = j.at("learning_rate").get<double>();
	c.seed = j.at("seed").get<std::uint64_t>();
	c.restarts = j.at("restarts").get<int>();
	c.lag_candidates = j.at("lag_candidates").get<std::vector<int>>();
	c.validation_len = j.at("validation_len").get<int>();
	return c;
}

ordered_json narnn_doc(const neural::NarnnModel &m) {
	return {{"kind", "narnn"},
	        {"config", detail::narnn_config(m.config)},
	        {"w_hidden", mat(m.w_hidden)},
	        {"b_hidden", vec(m.b_hidden)},
	        {"w_out", vec(m.w_out)},
	        {"b_out", m.b_out},
	        {"scale_maxabs", m.scale.maxabs},
	        {"final_loss", m.final_loss},
	        {"members", [&] {
		         ordered_json out = ordered_json::array();
		         for (const auto &n : m.members) {
			         out.push_back({{"w_hidden", mat(n.w_hidden)},
			                        {"b_hidden", vec(n.b_hidden)},
			                        {"w_out", vec(n.w_out)},
			                        {"b_out", n.b_out}});
		         }
		         return out;
	         }()}};
}

neural::NarnnModel narnn_read(const ordered_json &j) {
	neural::NarnnModel m;
	m.config = narnn_config_read(j.at("config"));
	m.w_hidden = read_mat(j.at("w_hidden"));
	m.b_hidden = read_vec(j.at("b_hidden"));
	m.w_out = read_vec(j.at("w_out"));
	m.b_out = j.at("b_out").get<double>();
	m.scale.maxabs = j.at("scale_maxabs").get<double>();
	m.final_loss = j.at("final_loss").get<double>();
	auto consistent = [&](const neural::NarnnModel &n) {
		return n.w_hidden.rows() == m.w_hidden.rows() && n.w_hidden.cols() == m.w_hidden.cols() &&
		       n.b_hidden.size() == n.w_hidden.rows() && n.w_out.size() == n.w_hidden.rows();
	};
	if (!consistent(m)) {
		throw Error(ErrorKind::FormatError, "NARNN layer shapes are inconsistent");
	}
	for (const auto &e : j.at("members")) {
		neural::NarnnModel n;
		n.w_hidden = read_mat(e.at("w_hidden"));
		n.b_hidden = read_vec(e.at("b_hidden"));
		n.w_out = read_vec(e.at("w_out"));
		n.b_out = e.at("b_out").get<double>();
		if (!consistent(n)) {
			throw Error(ErrorKind::FormatError, "NARNN ensemble member shapes are inconsistent");
		}
		m.members.push_back(std::move(n));
	}
	return m;
}

template <typename Fn>
auto parse_doc(std::string_view text, std::string_view kind, Fn &&read) {
	try {
		const ordered_json j = ordered_json::parse(text);
		if (j.at("kind").get<std::string>() != kind) {
			throw Error(ErrorKind::FormatError, "expected a '" + std::string(kind) + "' document, got '" +
			                                        j.at("kind").get<std::string>() + "'");
		}
		return read(j);
	} catch (const nlohmann::json::exception &e) {
		throw Error(ErrorKind::FormatError, std::string(kind) + " document: " + e.what());
	}
}

} // namespace

namespace detail {

ordered_json narnn_config(const neural::NarnnConfig &c) {
	return {{"lags", c.lags},         {"hidden", c.hidden},     {"epochs", c.epochs},
	        {"learning_rate", c.learning_rate}, {"seed", c.seed}, {"restarts", c.restarts},
	        {"lag_candidates", c.lag_candidates}, {"validation_len", c.validation_len}};
}

ordered_json lstm_config(const neural::LstmConfig &c) {
	return {{"window", c.window},
	        {"hidden", c.hidden},
	        {"epochs", c.epochs},
	        {"learning_rate", c.learning_rate},
	        {"seed", c.seed}};
}

ordered_json additive_config(const additive::AdditiveConfig &c) {
	ordered_json holidays = ordered_json::array();
	for (const auto &h : c.holidays) {
		holidays.push_back({{"date", format_iso_date(h.date)}, {"label", h.label}});
	}
	return {{"n_changepoints", c.n_changepoints}, {"changepoint_range", c.changepoint_range},
	        {"fourier_order", c.fourier_order},   {"lambda_delta", c.lambda_delta},
	        {"lambda_beta", c.lambda_beta},       {"holidays", std::move(holidays)}};
}

ordered_json settings(const benchmark::ModelSettings &s) {
	ordered_json arima{{"order", s.arima_order ? ordered_json(s.arima_order->to_string()) : ordered_json("auto")},
	                   {"grid", {{"max_p", s.arima_grid.max_p}, {"max_d", s.arima_grid.max_d}, {"max_q", s.arima_grid.max_q}}},
	                   {"intercept", s.arima.intercept ? ordered_json(*s.arima.intercept) : ordered_json("auto")},
	                   {"min_sample_margin", s.arima.min_sample_margin},
	                   {"max_evaluations", s.arima.max_evaluations},
	                   {"selection", "AICc"},
	                   {"estimation", "conditional sum of squares"}};
	ordered_json narnn = narnn_config(s.narnn);
	narnn.erase("seed");
	ordered_json lstm = lstm_config(s.lstm);
	lstm.erase("seed");
	return {{"arima", std::move(arima)},
	        {"narnn", std::move(narnn)},
	        {"lstm", std::move(lstm)},
	        {"additive", additive_config(s.additive)},
	        {"holt_winters", {{"season_length", s.season_length}, {"seasonality", "multiplicative"}}},
	        {"interval_level", 0.9}};
}

} // namespace detail

std::string to_json(const arima::ArimaModel &model) { return arima_doc(model).dump(2); }

std::string to_json(const smoothing::HwModel &m) {
	const ordered_json doc{{"kind", "holt-winters"},
	                       {"alpha", m.params.alpha},
	                       {"beta", m.params.beta},
	                       {"gamma", m.params.gamma},
	                       {"season_length", m.params.m},
	                       {"level", m.state.level},
	                       {"trend", m.state.trend},
	                       {"seasonal", m.state.seasonal},
	                       {"seasonal_enabled", m.seasonal},
	                       {"residuals", series(m.residuals)},
	                       {"sse", m.sse},
	                       {"sigma", m.sigma},
	                       {"last_date", format_iso_date(m.last_date)}};
	return doc.dump(2);
}

std::string to_json(const neural::NarnnModel &model) { return narnn_doc(model).dump(2); }

std::string to_json(const neural::LstmModel &m) {
	const auto &w = m.weights;
	const ordered_json doc{{"kind", "lstm"},
	                       {"config", detail::lstm_config(m.config)},
	                       {"w_f", mat(w.w_f)},
	                       {"w_i", mat(w.w_i)},
	                       {"w_c", mat(w.w_c)},
	                       {"w_o", mat(w.w_o)},
	                       {"b_f", vec(w.b_f)},
	                       {"b_i", vec(w.b_i)},
	                       {"b_c", vec(w.b_c)},
	                       {"b_o", vec(w.b_o)},
	                       {"w_out", vec(w.w_out)},
	                       {"b_out", w.b_out},
	                       {"scale_min", m.scale.min},
	                       {"scale_max", m.scale.max},
	                       {"final_loss", m.final_loss},
	                       {"last_window", vec(m.last_window)},
	                       {"sigma", m.sigma},
	                       {"last_date", format_iso_date(m.last_date)}};
	return doc.dump(2);
}

std::string to_json(const additive::AdditiveModel &m) {
	const ordered_json doc{{"kind", "additive"},
	                       {"config", detail::additive_config(m.config)},
	                       {"slope", m.slope},
	                       {"offset", m.offset},
	                       {"delta", vec(m.delta)},
	                       {"beta", vec(m.beta)},
	                       {"changepoints", vec(m.changepoints)},
	                       {"holiday_labels", m.holiday_labels},
	                       {"origin", format_iso_date(m.origin)},
	                       {"span", m.span},
	                       {"y_scale", m.y_scale},
	                       {"sigma", m.sigma},
	                       {"last_date", format_iso_date(m.last_date)}};
	return doc.dump(2);
}

std::string to_json(const hybrid::HybridModel &m) {
	const ordered_json doc{{"kind", "hybrid"},
	                       {"linear", arima_doc(m.linear)},
	                       {"nonlinear", narnn_doc(m.nonlinear)},
	                       {"residual_tail", vec(m.residual_tail)}};
	return doc.dump(2);
}

arima::ArimaModel arima_from_json(std::string_view text) { return parse_doc(text, "arima", arima_read); }

smoothing::HwModel holt_winters_from_json(std::string_view text) {
	return parse_doc(text, "holt-winters", [](const ordered_json &j) {
		smoothing::HwModel m{{j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("gamma").get<double>(),
		                      j.at("season_length").get<int>()},
		                     {j.at("level").get<double>(), j.at("trend").get<double>(),
		                      j.at("seasonal").get<std::vector<double>>()},
		                     j.at("seasonal_enabled").get<bool>(),
		                     read_series(j.at("residuals")),
		                     j.at("sse").get<double>(),
		                     j.at("sigma").get<double>(),
		                     parse_iso_date(j.at("last_date").get<std::string>())};
		return m;
	});
}

neural::NarnnModel narnn_from_json(std::string_view text) { return parse_doc(text, "narnn", narnn_read); }

neural::LstmModel lstm_from_json(std::string_view text) {
	return parse_doc(text, "lstm", [](const ordered_json &j) {
		neural::LstmModel m;
		const auto &c = j.at("config");
		m.config.window = c.at("window").get<int>();
		m.config.hidden = c.at("hidden").get<int>();
		m.config.epochs = c.at("epochs").get<int>();
		m.config.learning_rate = c.at("learning_rate").get<double>();
		m.config.seed = c.at("seed").get<std::uint64_t>();
		auto &w = m.weights;
		w.w_f = read_mat(j.at("w_f"));
		w.w_i = read_mat(j.at("w_i"));
		w.w_c = read_mat(j.at("w_c"));
		w.w_o = read_mat(j.at("w_o"));
		w.b_f = read_vec(j.at("b_f"));
		w.b_i = read_vec(j.at("b_i"));
		w.b_c = read_vec(j.at("b_c"));
		w.b_o = read_vec(j.at("b_o"));
		w.w_out = read_vec(j.at("w_out"));
		w.b_out = j.at("b_out").get<double>();
		m.scale = {j.at("scale_min").get<double>(), j.at("scale_max").get<double>()};
		m.final_loss = j.at("final_loss").get<double>();
		m.last_window = read_vec(j.at("last_window"));
		m.sigma = j.at("sigma").get<double>();
		m.last_date = parse_iso_date(j.at("last_date").get<std::string>());
		return m;
	});
}

additive::AdditiveModel additive_from_json(std::string_view text) {
	return parse_doc(text, "additive", [](const ordered_json &j) {
		additive::AdditiveModel m;
		const auto &c = j.at("config");
		m.config.n_changepoints = c.at("n_changepoints").get<int>();
		m.config.changepoint_range = c.at("changepoint_range").get<double>();
		m.config.fourier_order = c.at("fourier_order").get<int>();
		m.config.lambda_delta = c.at("lambda_delta").get<double>();
		m.config.lambda_beta = c.at("lambda_beta").get<double>();
		for (const auto &h : c.at("holidays")) {
			m.config.holidays.push_back(
			    {parse_iso_date(h.at("date").get<std::string>()), h.at("label").get<std::string>()});
		}
		m.slope = j.at("slope").get<double>();
		m.offset = j.at("offset").get<double>();
		m.delta = read_vec(j.at("delta"));
		m.beta = read_vec(j.at("beta"));
		m.changepoints = read_vec(j.at("changepoints"));
		m.holiday_labels = j.at("holiday_labels").get<std::vector<std::string>>();
		m.origin = parse_iso_date(j.at("origin").get<std::string>());
		m.span = j.at("span").get<double>();
		m.y_scale = j.at("y_scale").get<double>();
		m.sigma = j.at("sigma").get<double>();
		m.last_date = parse_iso_date(j.at("last_date").get<std::string>());
		return m;
	});
}

hybrid::HybridModel hybrid_from_json(std::string_view text) {
	return parse_doc(text, "hybrid", [](const ordered_json &j) {
		hybrid::HybridModel m{arima_read(j.at("linear")), narnn_read(j.at("nonlinear")),
		                      read_vec(j.at("residual_tail"))};
		if (m.residual_tail.size() != m.nonlinear.lags()) {
			throw Error(ErrorKind::FormatError, "residual_tail length differs from the NARNN lag count");
		}
		return m;
	});
}

} // namespace epiforecast::serialize
