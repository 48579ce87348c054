#include "epiforecast/csv.hpp"
#include "epiforecast/ingest.hpp"
#include "epiforecast/neural.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace epiforecast;
using namespace epiforecast::neural;

namespace {

template <typename Fn>
ErrorKind kind_of(Fn &&fn) {
	try {
		fn();
	} catch (const Error &e) {
		return e.kind();
	}
	FAIL("expected an epiforecast::Error");
	return ErrorKind::InvalidArgument;
}

LstmWeights zero_lstm(int input, int hidden) {
	LstmWeights w = lstm_init(input, hidden, 1);
	w.assign(Eigen::VectorXd::Zero(w.parameter_count()));
	return w;
}

Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64 &rng, double scale = 1.0) {
	std::normal_distribution<double> d(0.0, scale);
	Eigen::VectorXd v(n);
	for (auto &x : v) {
		x = d(rng);
	}
	return v;
}

TimeSeries india_until(Date last) {
	const auto table = ingest::parse_jhu_csv(csv::read_file(EPIFORECAST_FIXTURE));
	const TimeSeries india = ingest::aggregate_country(table, "India");
	const Eigen::Index end = *india.index_of(last);
	Eigen::Index first = 0;
	while (india[first] < 1.0) {
		++first;
	}
	return india.slice(first, end - first + 1);
}

} // namespace

TEST_CASE("lag embedding orders inputs newest first") {
	const Dataset d = lag_embed((Eigen::VectorXd(5) << 1, 2, 3, 4, 5).finished(), 2);
	REQUIRE(d.inputs.rows() == 3);
	CHECK(d.inputs.row(0) == Eigen::RowVector2d(2, 1));
	CHECK(d.targets == Eigen::Vector3d(3, 4, 5));
	const Dataset w = window_embed((Eigen::VectorXd(5) << 1, 2, 3, 4, 5).finished(), 2);
	CHECK(w.inputs.row(0) == Eigen::RowVector2d(1, 2));
	CHECK(w.targets[0] == 3);
}

TEST_CASE("LSTM cell hand examples") {
	const LstmWeights w = zero_lstm(1, 3);
	const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.7);
	SUBCASE("zero state") {
		const CellTrace t = lstm_step(x, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), w);
		CHECK(t.f.isApprox(Eigen::VectorXd::Constant(3, 0.5)));
		CHECK(t.i.isApprox(Eigen::VectorXd::Constant(3, 0.5)));
		CHECK(t.o.isApprox(Eigen::VectorXd::Constant(3, 0.5)));
		CHECK(t.c_tilde.isZero(0.0));
		CHECK(t.out.c.isZero(0.0));
		CHECK(t.out.h.isZero(0.0));
	}
	SUBCASE("carried cell state") {
		const CellState s = lstm_cell(x, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Constant(3, 2.0), w);
		for (Eigen::Index k = 0; k < 3; ++k) {
			CHECK(s.c[k] == doctest::Approx(1.0));
			CHECK(s.h[k] == doctest::Approx(0.5 * std::tanh(1.0)));
			CHECK(s.h[k] == doctest::Approx(0.3808).epsilon(1e-4));
		}
	}
	CHECK(kind_of([&] { lstm_cell(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(3), w); }) ==
	      ErrorKind::ShapeError);
	CHECK(kind_of([&] { lstm_cell(x, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3), w); }) == ErrorKind::ShapeError);
}

TEST_CASE("gate codomains over random weights") {
	std::mt19937_64 rng(17);
	for (int trial = 0; trial < 1000; ++trial) {
		LstmWeights w = lstm_init(2, 4, 100 + trial);
		w.assign(random_vector(w.parameter_count(), rng, 3.0));
		const CellTrace t = lstm_step(random_vector(2, rng, 5.0), random_vector(4, rng), random_vector(4, rng), w);
		for (const Eigen::VectorXd *g : {&t.f, &t.i, &t.o}) {
			CHECK(g->minCoeff() >= 0.0);
			CHECK(g->maxCoeff() <= 1.0);
		}
		CHECK(t.c_tilde.cwiseAbs().maxCoeff() <= 1.0);
	}
}

TEST_CASE("initialization is seeded and scaled") {
	const NarnnModel a = narnn_init(3, 4, 9);
	const NarnnModel b = narnn_init(3, 4, 9);
	CHECK(a.flatten() == b.flatten());
	CHECK(a.parameter_count() == 3 * 4 + 4 + 4 + 1);
	CHECK(a.w_hidden.cwiseAbs().maxCoeff() <= std::sqrt(6.0 / 7.0));
	CHECK(a.b_hidden.isZero(0.0));
	NarnnModel c = a;
	c.assign(a.flatten());
	CHECK(c.flatten() == a.flatten());
	CHECK(narnn_init(3, 4, 10).flatten() != a.flatten());
}

TEST_CASE("analytic gradients match finite differences") {
	std::mt19937_64 rng(3);
	SUBCASE("NARNN") {
		NarnnModel m = narnn_init(3, 4, 5);
		m.assign(random_vector(m.parameter_count(), rng, 0.5));
		const Dataset d = lag_embed(random_vector(30, rng, 0.5), 3);
		const GradCheckReport r = grad_check(m, d, 1e-5);
		CHECK(r.max_relative < 1e-5);
	}
	SUBCASE("LSTM") {
		LstmWeights w = lstm_init(1, 4, 5);
		w.assign(random_vector(w.parameter_count(), rng, 0.5));
		const Dataset d = window_embed(random_vector(20, rng, 0.5), 3);
		const GradCheckReport r = grad_check(w, d, 1e-5);
		CHECK(r.max_relative < 1e-4);
	}
	SUBCASE("zero-gradient point") {
		NarnnModel m = narnn_init(2, 3, 1);
		m.assign(Eigen::VectorXd::Zero(m.parameter_count()));
		Dataset d;
		d.inputs = (Eigen::MatrixXd(2, 2) << 1, -1, -1, 1).finished();
		d.targets = Eigen::VectorXd::Zero(2);
		const auto [loss, grad] = narnn_gradient(m, d);
		CHECK(loss == 0.0);
		CHECK(grad.cwiseAbs().maxCoeff() < 1e-10);
		CHECK(grad_check(m, d, 1e-5).max_absolute < 1e-10);
	}
}

TEST_CASE("NARNN closed-loop forecasting") {
	NarnnModel m = narnn_init(3, 4, 7);
	std::mt19937_64 rng(1);
	m.assign(random_vector(m.parameter_count(), rng, 0.5));
	m.scale.maxabs = 20.0;
	const Eigen::VectorXd window = (Eigen::VectorXd(3) << 4.0, -2.0, 6.0).finished();

	const Eigen::VectorXd f1 = narnn_forecast(m, window, 1);
	CHECK(f1[0] == narnn_forward(m, Eigen::Vector3d(6.0, -2.0, 4.0) / 20.0) * 20.0);

	// Hand-unrolled recursion, newest lag first.
	std::vector<double> hist{4.0 / 20, -2.0 / 20, 6.0 / 20};
	Eigen::VectorXd manual(3);
	for (int k = 0; k < 3; ++k) {
		const std::size_t n = hist.size();
		const double next = narnn_forward(m, Eigen::Vector3d(hist[n - 1], hist[n - 2], hist[n - 3]));
		hist.push_back(next);
		manual[k] = next * 20.0;
	}
	const Eigen::VectorXd f3 = narnn_forecast(m, window, 3);
	CHECK(f3 == manual);
	CHECK(narnn_forecast(m, window, 8).head(3) == f3);

	NarnnModel z = m;
	z.assign(Eigen::VectorXd::Zero(z.parameter_count()));
	z.b_out = 0.25;
	CHECK(narnn_forecast(z, window, 4) == Eigen::VectorXd::Constant(4, 5.0));

	CHECK(kind_of([&] { narnn_forecast(m, Eigen::VectorXd::Zero(2), 1); }) == ErrorKind::ShapeError);
}

TEST_CASE("NARNN training") {
	SUBCASE("deterministic logistic map is learnable") {
		Eigen::VectorXd r(60);
		r[0] = 0.9;
		for (Eigen::Index t = 1; t < r.size(); ++t) {
			r[t] = 0.8 * r[t - 1] * (1.0 - r[t - 1]);
		}
		const TimeSeries res("res", make_date(2020, 1, 1), r);
		NarnnConfig cfg;
		cfg.lags = 3;
		const NarnnModel m = narnn_fit(res, cfg);
		const Dataset d = lag_embed(r / m.scale.maxabs, 3);
		const Eigen::VectorXd pred = narnn_predict(m, d.inputs) * m.scale.maxabs;
		const Eigen::VectorXd target = r.tail(pred.size());
		const double mse = (pred - target).squaredNorm() / double(pred.size());
		const double var = (r.array() - r.mean()).square().sum() / double(r.size());
		CHECK(mse < 0.1 * var);

		const NarnnModel again = narnn_fit(res, cfg);
		CHECK(again.flatten() == m.flatten());
		CHECK(m.members.size() == 4);
		CHECK(again.members.back().flatten() == m.members.back().flatten());
		CHECK(m.final_loss == doctest::Approx(narnn_loss(m, lag_embed(r / m.scale.maxabs, 3))));
	}
	SUBCASE("white-noise residuals give small forecasts") {
		std::mt19937_64 rng(42);
		const Eigen::VectorXd r = random_vector(120, rng, 50.0);
		const TimeSeries res("res", make_date(2020, 1, 1), r);
		const NarnnModel m = narnn_fit(res, {});
		const double sigma = std::sqrt((r.array() - r.mean()).square().sum() / double(r.size() - 1));
		const Eigen::VectorXd f = narnn_forecast(m, r.tail(m.lags()), 10);
		CHECK(f.cwiseAbs().maxCoeff() <= 2.0 * sigma);
	}
	SUBCASE("lag selection picks a candidate") {
		std::mt19937_64 rng(5);
		const TimeSeries res("res", make_date(2020, 1, 1), random_vector(80, rng));
		NarnnConfig cfg;
		cfg.restarts = 2;
		cfg.epochs = 100;
		const int lags = select_lags(res, cfg);
		CHECK((lags == 3 || lags == 5 || lags == 7));
		CHECK(select_lags(res, cfg) == lags);
	}
	SUBCASE("errors") {
		CHECK(kind_of([] { narnn_fit(TimeSeries("r", make_date(2020, 1, 1), Eigen::VectorXd::Ones(15)), {}); }) ==
		      ErrorKind::InsufficientData);
		CHECK(kind_of([] { narnn_fit(TimeSeries("r", make_date(2020, 1, 1), Eigen::VectorXd::Zero(40)), {}); }) ==
		      ErrorKind::DegenerateScale);
		NarnnConfig wild;
		wild.learning_rate = 1e200;
		std::mt19937_64 rng(2);
		const TimeSeries res("r", make_date(2020, 1, 1), random_vector(60, rng));
		const ErrorKind k = kind_of([&] { narnn_fit(res, wild); });
		CHECK(k == ErrorKind::DivergenceError);
	}
}

TEST_CASE("LSTM fit and forecast on the India series") {
	const TimeSeries train = india_until(make_date(2020, 5, 5));
	LstmConfig cfg;
	const LstmModel a = lstm_fit(train, cfg);
	const LstmModel b = lstm_fit(train, cfg);
	CHECK(a.weights.flatten() == b.weights.flatten());
	REQUIRE(!a.loss_curve.empty());
	CHECK(a.loss_curve.back() <= a.loss_curve.front());

	const ForecastResult f = lstm_forecast(a, 10);
	CHECK(f.model == "LSTM");
	CHECK(f.start == make_date(2020, 5, 6));
	const double lo = train.values().minCoeff(), hi = train.values().maxCoeff();
	for (Eigen::Index k = 0; k < 10; ++k) {
		CHECK(std::isfinite(f.point[k]));
		CHECK(f.point[k] >= 0.5 * lo);
		CHECK(f.point[k] <= 2.0 * hi);
	}
	for (Eigen::Index k = 1; k < 10; ++k) {
		CHECK(f.upper[k] - f.lower[k] >= f.upper[k - 1] - f.lower[k - 1]);
	}
	const double one = lstm_forward(a.weights, a.last_window);
	CHECK(f.point[0] == doctest::Approx(a.scale.min + one * (a.scale.max - a.scale.min)).epsilon(1e-12));
	CHECK(lstm_forecast(a, 4).point == f.point.head(4));

	CHECK(kind_of([] { lstm_fit(TimeSeries("c", make_date(2020, 1, 1), Eigen::VectorXd::Constant(40, 3.0)), {}); }) ==
	      ErrorKind::DegenerateScale);
	CHECK(kind_of([] { lstm_fit(TimeSeries("c", make_date(2020, 1, 1), Eigen::VectorXd::LinSpaced(12, 1, 12)), {}); }) ==
	      ErrorKind::InsufficientData);
}
