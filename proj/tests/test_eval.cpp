#include "epiforecast/eval.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace epiforecast;
using namespace epiforecast::eval;

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

Eigen::VectorXd vec(std::initializer_list<double> v) {
	Eigen::VectorXd out(Eigen::Index(v.size()));
	Eigen::Index i = 0;
	for (const double x : v) {
		out[i++] = x;
	}
	return out;
}

MetricReport report(std::string model, double rmse_value, double mae_value = 1.0, double mape_value = 1.0,
                    std::string country = "India", std::string interval = "6MAY-15MAY") {
	MetricReport r;
	r.country = std::move(country);
	r.interval = std::move(interval);
	r.model = std::move(model);
	r.rmse = rmse_value;
	r.mae = mae_value;
	r.mape_pct = mape_value;
	return r;
}

std::vector<std::string> labels(const std::vector<MetricReport> &rs) {
	std::vector<std::string> out;
	for (const auto &r : rs) {
		out.push_back(r.model);
	}
	return out;
}

} // namespace

TEST_CASE("hand cases") {
	const Eigen::VectorXd a = vec({100, 200}), p = vec({110, 190});
	CHECK(rmse(a, p) == 10.0);
	CHECK(mae(a, p) == 10.0);
	CHECK(mape_pct(a, p) == 7.5);
	CHECK(rmse(a, a) == 0.0);
	CHECK(mae(a, a) == 0.0);
	CHECK(mape_pct(a, a) == 0.0);
	CHECK(rmse(vec({5}), vec({12})) == 7.0);
	CHECK(mae(vec({10, 10}), vec({13, 7})) == 3.0);
}

TEST_CASE("metric errors") {
	CHECK(kind_of([] { rmse(vec({1, 2}), vec({1})); }) == ErrorKind::ShapeError);
	CHECK(kind_of([] { mae(Eigen::VectorXd(0), Eigen::VectorXd(0)); }) == ErrorKind::EmptyInput);
	try {
		mape_pct(vec({1, 0, 2}), vec({1, 1, 1}));
		FAIL("expected ZeroActual");
	} catch (const Error &e) {
		CHECK(e.kind() == ErrorKind::ZeroActual);
		CHECK(std::string(e.what()).find("index 1") != std::string::npos);
	}
	CHECK(kind_of([] { coverage90_pct(vec({1}), vec({2}), vec({1})); }) == ErrorKind::InvalidInterval);
}

TEST_CASE("coverage") {
	CHECK(coverage90_pct(vec({1, 2, 3}), vec({0, 0, 4}), vec({2, 3, 5})) == doctest::Approx(66.67).epsilon(1e-4));
	Eigen::VectorXd actual = Eigen::VectorXd::LinSpaced(10, 1, 10);
	Eigen::VectorXd lo = actual.array() + 1.0, hi = actual.array() + 2.0;
	lo.head(4) = actual.head(4);  // inclusive on the boundary
	CHECK(coverage90_pct(actual, lo, hi) == 40.0);
	CHECK(coverage90_pct(actual, actual, actual) == 100.0);
}

TEST_CASE("brute-force oracle on random pairs") {
	std::mt19937_64 rng(20200506);
	std::uniform_int_distribution<int> len(1, 50);
	std::uniform_real_distribution<double> val(1.0, 1e6), noise(-0.3, 0.3);
	for (int trial = 0; trial < 1000; ++trial) {
		const int n = len(rng);
		Eigen::VectorXd a(n), p(n);
		for (int i = 0; i < n; ++i) {
			a[i] = val(rng);
			p[i] = a[i] * (1.0 + noise(rng));
		}
		long double sq = 0, ab = 0, pc = 0;
		for (int i = 0; i < n; ++i) {
			const long double e = (long double)a[i] - (long double)p[i];
			sq += e * e;
			ab += e < 0 ? -e : e;
			pc += (e < 0 ? -e : e) / (long double)a[i];
		}
		const double r_oracle = double(std::sqrt(sq / n)), m_oracle = double(ab / n), p_oracle = double(100 * pc / n);
		CHECK(std::abs(rmse(a, p) - r_oracle) <= 1e-12 * r_oracle);
		CHECK(std::abs(mae(a, p) - m_oracle) <= 1e-12 * m_oracle);
		CHECK(std::abs(mape_pct(a, p) - p_oracle) <= 1e-12 * p_oracle);
		CHECK(rmse(a, p) >= mae(a, p) * (1.0 - 1e-15));
		const double c = 3.7;
		CHECK(rmse(Eigen::VectorXd(c * a), Eigen::VectorXd(c * p)) == doctest::Approx(c * rmse(a, p)).epsilon(1e-12));
		CHECK(mape_pct(Eigen::VectorXd(c * a), Eigen::VectorXd(c * p)) == doctest::Approx(mape_pct(a, p)).epsilon(1e-12));
	}
}

TEST_CASE("ranking") {
	SUBCASE("published India example") {
		const auto ranked = rank({report("ARIMA", 502.30), report("Holt-Winters", 3556.82), report("LSTM", 7755.93),
		                          report("Hybrid", 437.30), report("Additive", 4484.73)});
		CHECK(labels(ranked) == std::vector<std::string>{"Hybrid", "ARIMA", "Holt-Winters", "Additive", "LSTM"});
		for (std::size_t i = 0; i < ranked.size(); ++i) {
			CHECK(ranked[i].rank == int(i + 1));
		}
	}
	SUBCASE("label breaks exact ties") {
		const auto ranked = rank({report("b", 1.0), report("a", 1.0)});
		CHECK(labels(ranked) == std::vector<std::string>{"a", "b"});
	}
	SUBCASE("mae then mape break rmse ties") {
		const auto ranked = rank({report("a", 1.0, 2.0), report("b", 1.0, 1.0, 9.0), report("c", 1.0, 1.0, 3.0)});
		CHECK(labels(ranked) == std::vector<std::string>{"c", "b", "a"});
	}
	SUBCASE("single report") {
		const auto ranked = rank({report("only", 3.0)});
		REQUIRE(ranked.size() == 1);
		CHECK(ranked[0].rank == 1);
	}
	SUBCASE("groups and error cells") {
		MetricReport broken = report("LSTM", 0.0);
		broken.error = "DivergenceError: boom";
		const auto ranked = rank({report("ARIMA", 5.0, 1, 1, "US"), broken, report("Hybrid", 4.0),
		                          report("ARIMA", 6.0), report("Hybrid", 2.0, 1, 1, "US")});
		REQUIRE(ranked.size() == 5);
		CHECK(ranked[0].country == "India");
		CHECK(labels(ranked) == std::vector<std::string>{"Hybrid", "ARIMA", "LSTM", "Hybrid", "ARIMA"});
		CHECK(ranked[2].rank == 0);
		CHECK(ranked[3].rank == 1);
	}
	SUBCASE("permutation invariance") {
		std::vector<MetricReport> in{report("A", 3.0), report("B", 1.0), report("C", 2.0), report("D", 1.0, 0.5)};
		const auto expect = labels(rank(in));
		std::sort(in.begin(), in.end(), [](const auto &x, const auto &y) { return x.model < y.model; });
		std::mt19937_64 rng(1);
		for (int trial = 0; trial < 24; ++trial) {
			std::shuffle(in.begin(), in.end(), rng);
			CHECK(labels(rank(in)) == expect);
		}
	}
}
