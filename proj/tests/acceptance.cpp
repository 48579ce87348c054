// Prints one PASS/FAIL line per acceptance criterion. Exits non-zero only when
// the harness itself breaks, or with --strict when any criterion fails.

#include "epiforecast/additive.hpp"
#include "epiforecast/arima.hpp"
#include "epiforecast/benchmark.hpp"
#include "epiforecast/csv.hpp"
#include "epiforecast/eval.hpp"
#include "epiforecast/hybrid.hpp"
#include "epiforecast/ingest.hpp"
#include "epiforecast/neural.hpp"
#include "epiforecast/random.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

using namespace epiforecast;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int digits = 2) {
	std::ostringstream s;
	s << std::fixed << std::setprecision(digits) << v;
	return s.str();
}

struct Verdict {
	bool pass = false;
	std::string detail;
};

struct Report {
	std::vector<std::string> lines;
	int failed = 0;

	void add(int id, const std::string &name, const Verdict &v) {
		std::ostringstream s;
		s << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << v.detail;
		lines.push_back(s.str());
		std::cout << lines.back() << std::endl;
		failed += v.pass ? 0 : 1;
	}
};

std::map<std::string, TimeSeries> load_dataset() {
	const auto table = ingest::parse_jhu_csv(csv::read_file(EPIFORECAST_FIXTURE));
	std::map<std::string, TimeSeries> out;
	for (const char *c : {"India", "US", "Brazil"}) {
		out.emplace(c, ingest::aggregate_country(table, c));
	}
	return out;
}

const eval::MetricReport *find(const benchmark::BenchmarkResult &r, const std::string &country,
                               const std::string &interval, const std::string &label) {
	for (const auto &m : r.table) {
		if (m.country == country && m.interval == interval && m.model == label) {
			return &m;
		}
	}
	return nullptr;
}

std::string rmse_or_error(const eval::MetricReport *m) {
	if (!m) {
		return "missing";
	}
	return m->ok() ? fmt(m->rmse) : "error(" + *m->error + ")";
}

benchmark::BenchmarkSpec spec_for(std::vector<benchmark::Cell> cells) {
	benchmark::BenchmarkSpec spec;
	spec.cells = std::move(cells);
	return spec;
}

/// Everything a benchmark run writes, concatenated, for byte comparison.
std::string run_bytes(const benchmark::BenchmarkSpec &spec, const benchmark::BenchmarkResult &r) {
	std::string out = benchmark::rank_csv(r.table) + benchmark::errors_csv(r.table) +
	                  benchmark::metadata_json(spec, r, "fixture");
	for (const auto &o : r.outcomes) {
		out += benchmark::forecast_file_name(o.cell) + "\n" + benchmark::forecast_csv(o);
	}
	return out;
}

Verdict hybrid_vs_arima(const benchmark::BenchmarkResult &r, const std::string &country,
                        const std::vector<std::string> &intervals, std::size_t need, int *wins_out = nullptr) {
	std::size_t wins = 0;
	std::string detail;
	for (const auto &iv : intervals) {
		const auto *a = find(r, country, iv, "ARIMA");
		const auto *h = find(r, country, iv, "Hybrid");
		const bool win = a && h && a->ok() && h->ok() && h->rmse < a->rmse;
		wins += win ? 1 : 0;
		detail += country + " " + iv + " hybrid " + rmse_or_error(h) + " vs ARIMA " + rmse_or_error(a) +
		          (win ? " (win); " : " (loss); ");
	}
	if (wins_out) {
		*wins_out = int(wins);
	}
	return {wins >= need, detail + std::to_string(wins) + "/" + std::to_string(intervals.size()) + " wins"};
}

// ---------------------------------------------------------------------------

Verdict metric_oracle() {
	const Eigen::VectorXd a = (Eigen::VectorXd(2) << 100, 200).finished();
	const Eigen::VectorXd p = (Eigen::VectorXd(2) << 110, 190).finished();
	bool hand = eval::rmse(a, p) == 10.0 && eval::mae(a, p) == 10.0 && eval::mape_pct(a, p) == 7.5;
	std::mt19937_64 rng(5);
	std::uniform_int_distribution<int> len(1, 60);
	std::uniform_real_distribution<double> val(-1e5, 1e5);
	double worst = 0.0;
	for (int trial = 0; trial < 1000; ++trial) {
		const int n = len(rng);
		Eigen::VectorXd x(n), y(n);
		for (int i = 0; i < n; ++i) {
			do {
				x[i] = val(rng);
			} while (x[i] == 0.0);
			y[i] = val(rng);
		}
		long double sq = 0, ab = 0, pc = 0;
		for (int i = 0; i < n; ++i) {
			const long double e = std::fabs((long double)x[i] - (long double)y[i]);
			sq += e * e;
			ab += e;
			pc += e / std::fabs((long double)x[i]);
		}
		const double oracle[3] = {double(std::sqrt(sq / n)), double(ab / n), double(100 * pc / n)};
		const double got[3] = {eval::rmse(x, y), eval::mae(x, y), eval::mape_pct(x, y)};
		for (int k = 0; k < 3; ++k) {
			worst = std::max(worst, std::abs(got[k] - oracle[k]) / std::max(std::abs(oracle[k]), 1e-300));
		}
	}
	return {hand && worst <= 1e-12,
	        std::string("hand cases ") + (hand ? "exact" : "inexact") + ", worst relative deviation over 1000 pairs " +
	            [&] {
		            std::ostringstream s;
		            s << std::scientific << std::setprecision(2) << worst;
		            return s.str();
	            }()};
}

Verdict estimation_recovery() {
	arima::ArimaParams p;
	p.phi = Eigen::VectorXd::Constant(1, 0.7);
	p.theta = Eigen::VectorXd(0);
	double worst = 0.0;
	for (std::uint64_t seed = 1; seed <= 20; ++seed) {
		const arima::ArimaModel m = arima::fit(arima::simulate({1, 0, 0}, p, 500, seed), {1, 0, 0});
		worst = std::max(worst, std::abs(m.params.phi[0] - 0.7));
	}

	std::mt19937_64 rng(9);
	std::uniform_int_distribution<int> dist(0, 1000000);
	Eigen::VectorXd v(60);
	for (auto &x : v) {
		x = dist(rng);
	}
	const TimeSeries s("r", make_date(2020, 1, 1), v);
	arima::FitOptions loose;
	loose.intercept = false;
	const ForecastResult flat = arima::forecast(arima::fit(s, {0, 1, 0}, loose), 10);
	const bool is_flat = (flat.point.array() == v[59]).all();

	bool round_trip = true;
	for (int d = 0; d <= 2; ++d) {
		auto [diffed, state] = difference(s, d);
		round_trip = round_trip && inverse_difference(diffed, state).values() == v;
	}
	return {worst < 0.1 && is_flat && round_trip, "max |phi-0.7| over 20 seeds " + fmt(worst, 4) + ", (0,1,0) flat " +
	                                                  (is_flat ? "yes" : "no") + ", difference round trips " +
	                                                  (round_trip ? "exact" : "inexact")};
}

Verdict gradient_checks() {
	double narnn_worst = 0.0, lstm_worst = 0.0;
	for (std::uint64_t seed = 1; seed <= 10; ++seed) {
		std::mt19937_64 rng(seed);
		std::normal_distribution<double> d(0.0, 0.5);
		auto random = [&](Eigen::Index n) {
			Eigen::VectorXd v(n);
			for (auto &x : v) {
				x = d(rng);
			}
			return v;
		};
		neural::NarnnModel m = neural::narnn_init(3, 4, seed);
		m.assign(random(m.parameter_count()));
		narnn_worst = std::max(narnn_worst, neural::grad_check(m, neural::lag_embed(random(25), 3), 1e-5).max_relative);
		neural::LstmWeights w = neural::lstm_init(1, 4, seed);
		w.assign(random(w.parameter_count()));
		lstm_worst = std::max(lstm_worst, neural::grad_check(w, neural::window_embed(random(15), 3), 1e-5).max_relative);
	}
	std::ostringstream s;
	s << std::scientific << std::setprecision(2) << "NARNN max relative " << narnn_worst << " (< 1e-5), LSTM "
	  << lstm_worst << " (< 1e-4), 10 seeds each";
	return {narnn_worst < 1e-5 && lstm_worst < 1e-4, s.str()};
}

/// AR(1) phi=0.7 plus an optional period-4 logistic-map component; fixed order (1,0,0).
std::pair<double, double> synthetic_rmse(std::uint64_t seed, bool contaminated) {
	arima::ArimaParams p;
	p.phi = Eigen::VectorXd::Constant(1, 0.7);
	p.theta = Eigen::VectorXd(0);
	Eigen::VectorXd y = arima::simulate({1, 0, 0}, p, 210, seed).values();
	if (contaminated) {
		std::mt19937_64 rng(derive_seed(seed, 7));
		double z = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
		for (Eigen::Index t = 0; t < y.size(); ++t) {
			y[t] += 4.0 * z;
			z = 3.5 * z * (1.0 - z);
		}
	}
	const TimeSeries series("syn", make_date(2020, 1, 1), y);
	auto [train, test] = train_test_split(series, {});
	hybrid::HybridOptions o;
	o.order = arima::ArimaOrder{1, 0, 0};
	o.narnn.seed = derive_seed(42, seed);
	const hybrid::HybridModel m = hybrid::fit(train, o);
	const hybrid::Decomposition parts = hybrid::decompose_forecast(m, 10);
	const double arima_rmse = eval::rmse(test.values(), parts.linear.point);
	const double hybrid_rmse = eval::rmse(test.values(), hybrid::forecast(m, 10).point);
	return {arima_rmse, hybrid_rmse};
}

Verdict hybrid_construction() {
	int wins = 0;
	int within = 0;
	double sq_a = 0.0, sq_h = 0.0;
	for (std::uint64_t seed = 1; seed <= 20; ++seed) {
		const auto [a, h] = synthetic_rmse(seed, true);
		wins += h < a ? 1 : 0;
		const auto [a0, h0] = synthetic_rmse(seed, false);
		sq_a += a0 * a0;
		sq_h += h0 * h0;
		within += h0 <= 1.05 * a0 ? 1 : 0;
	}
	const double ratio = std::sqrt(sq_h / sq_a);
	return {wins >= 16 && ratio <= 1.05, "AR(1)+logistic: hybrid better in " + std::to_string(wins) +
	                                         "/20 seeds (need 16); pure AR(1): pooled RMSE ratio hybrid/ARIMA " +
	                                         fmt(ratio, 4) + " (need <= 1.05), per-seed within 5% in " +
	                                         std::to_string(within) + "/20"};
}

Verdict additivity(const std::map<std::string, TimeSeries> &data) {
	const auto iv = ingest::default_intervals().front();
	const TimeSeries sliced = ingest::slice_for_interval(data.at("India"), iv);
	auto [train, test] = train_test_split(sliced, SplitSpec{iv.length_days(), iv.end});

	hybrid::HybridOptions o;
	o.order = arima::ArimaOrder{1, 2, 1};
	const hybrid::HybridModel m = hybrid::fit(train, o);
	bool eq16 = true;
	for (int h = 1; h <= 10; ++h) {
		const auto parts = hybrid::decompose_forecast(m, h);
		eq16 = eq16 && (parts.linear.point + parts.nonlinear) == hybrid::forecast(m, h).point;
	}

	bool eq14 = true;
	const Eigen::Index offset = train.size() - m.linear.fitted.size();
	for (Eigen::Index t = 0; t < m.linear.fitted.size(); ++t) {
		eq14 = eq14 && m.linear.fitted[t] + m.linear.residuals[t] == train[t + offset];
	}

	const additive::AdditiveModel add = additive::fit(train);
	std::vector<Date> future;
	for (int k = 1; k <= 10; ++k) {
		future.push_back(train.end() + std::chrono::days(k));
	}
	const additive::Components c = additive::decompose(add, future);
	const Eigen::VectorXd point = additive::forecast(add, 10).point;
	const Eigen::VectorXd summed = c.trend + c.seasonal + c.holiday;
	const double eq12 = (summed - point).cwiseAbs().maxCoeff() / point.cwiseAbs().maxCoeff();
	std::ostringstream s;
	s << "hybrid stage sum " << (eq16 ? "exact" : "inexact") << " for h=1..10, fitted+residual "
	  << (eq14 ? "exact" : "inexact") << ", additive components relative gap " << std::scientific
	  << std::setprecision(1) << eq12;
	return {eq16 && eq14 && eq12 <= 1e-12, s.str()};
}

Verdict calibration() {
	arima::ArimaParams p;
	p.phi = Eigen::VectorXd::Constant(1, 0.7);
	p.theta = Eigen::VectorXd(0);
	int inside = 0;
	for (std::uint64_t rep = 1; rep <= 200; ++rep) {
		const TimeSeries y = arima::simulate({1, 0, 0}, p, 201, derive_seed(11, rep));
		const arima::ArimaModel m = arima::fit(y.slice(0, 200), {1, 0, 0});
		const ForecastResult f = arima::forecast(m, 1);
		inside += (f.lower[0] <= y[200] && y[200] <= f.upper[0]) ? 1 : 0;
	}
	const double pct = inside / 2.0;
	return {pct >= 85.0 && pct <= 95.0, "empirical h=1 coverage " + fmt(pct, 1) + "% over 200 replications"};
}

} // namespace

int main(int argc, char **argv) {
	const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
	Report report;
	try {
		const auto data = load_dataset();
		const auto intervals = ingest::default_intervals();
		std::vector<std::string> labels;
		for (const auto &iv : intervals) {
			labels.push_back(iv.label);
		}

		// 1: India ARIMA and hybrid only.
		auto t0 = Clock::now();
		const auto india_spec = spec_for(benchmark::grid_cells({"India"}, intervals, {"arima", "hybrid"}));
		const auto india = benchmark::run_benchmark(data, india_spec);
		const double t_india = seconds_since(t0);
		Verdict v1 = hybrid_vs_arima(india, "India", labels, 2);
		v1.pass = v1.pass && t_india < 120.0;
		v1.detail += ", " + fmt(t_india, 1) + " s";
		report.add(1, "hybrid beats ARIMA on India", v1);

		// 2: US and Brazil, first interval.
		t0 = Clock::now();
		const auto others = benchmark::run_benchmark(
		    data, spec_for(benchmark::grid_cells({"US", "Brazil"}, {intervals.front()}, {"arima", "hybrid"})));
		const double t_others = seconds_since(t0);
		int us_wins = 0, br_wins = 0;
		const Verdict us = hybrid_vs_arima(others, "US", {labels.front()}, 1, &us_wins);
		const Verdict br = hybrid_vs_arima(others, "Brazil", {labels.front()}, 1, &br_wins);
		const auto *us_a = find(others, "US", labels.front(), "ARIMA");
		const auto *us_h = find(others, "US", labels.front(), "Hybrid");
		const double gain = (us_a && us_h && us_a->ok() && us_h->ok()) ? 100.0 * (1.0 - us_h->rmse / us_a->rmse) : -1e9;
		report.add(2, "hybrid beats ARIMA on US and Brazil",
		           {us.pass && br.pass && gain >= 15.0 && t_others < 60.0,
		            us.detail + " " + br.detail + ", US improvement " + fmt(gain, 1) + "% (target >= 15%), " +
		                fmt(t_others, 1) + " s"});

		// Full protocol, twice, for 3, 4 and 10.
		const auto protocol = spec_for(benchmark::protocol_cells());
		t0 = Clock::now();
		const auto full = benchmark::run_benchmark(data, protocol);
		const double t_full = seconds_since(t0);
		const auto full_again = benchmark::run_benchmark(data, protocol);

		std::string ranks;
		bool rank_ok = true;
		for (const auto &iv : labels) {
			std::vector<std::string> order;
			for (const auto &m : full.table) {
				if (m.country == "India" && m.interval == iv && m.ok()) {
					order.push_back(m.model);
				}
			}
			const bool top2 = order.size() >= 2 &&
			                  ((order[0] == "ARIMA" && order[1] == "Hybrid") || (order[0] == "Hybrid" && order[1] == "ARIMA"));
			const bool lstm_not_first = order.empty() || order[0] != "LSTM";
			rank_ok = rank_ok && top2 && lstm_not_first;
			ranks += iv + ": ";
			for (std::size_t i = 0; i < order.size(); ++i) {
				ranks += (i ? " < " : "") + order[i];
			}
			ranks += top2 ? " (top-2 ok); " : " (top-2 violated); ";
		}
		report.add(3, "ranking on India intervals", {rank_ok, ranks});

		std::string mapes;
		bool mape_ok = true;
		for (const std::string iv : {"21JUL-30JUL", "1AUG-10AUG"}) {
			const auto *a = find(full, "India", iv, "ARIMA");
			const bool ok = a && a->ok() && a->mape_pct <= 1.0;
			mape_ok = mape_ok && ok;
			mapes += iv + " ARIMA MAPE " + (a && a->ok() ? fmt(a->mape_pct, 3) : std::string("error")) + "%" +
			         (ok ? " (ok); " : " (above 1%); ");
		}
		report.add(4, "ARIMA MAPE on India Jul/Aug", {mape_ok, mapes});

		report.add(5, "metric oracle", metric_oracle());
		report.add(6, "estimation recovery", estimation_recovery());
		report.add(7, "gradient checks", gradient_checks());
		report.add(8, "hybrid on synthetic data", hybrid_construction());
		report.add(9, "additivity identities", additivity(data));

		const bool same = run_bytes(protocol, full) == run_bytes(protocol, full_again);
		// Cells of the subset runs must match the same cells in the full run.
		bool consistent = true;
		for (const auto *part : {&india, &others}) {
			for (const auto &m : part->table) {
				const auto *f = find(full, m.country, m.interval, m.model);
				consistent = consistent && f && f->rmse == m.rmse;
			}
		}
		report.add(10, "determinism and runtime",
		           {same && consistent && t_full < 300.0,
		            std::string("two protocol runs ") + (same ? "byte-identical" : "differ") + ", subset runs " +
		                (consistent ? "agree" : "disagree") + " with the full run, full run " + fmt(t_full, 1) +
		                " s on " + std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " thread(s)"});

		report.add(11, "interval calibration", calibration());
	} catch (const std::exception &e) {
		std::cerr << "acceptance harness aborted: " << e.what() << std::endl;
		return 2;
	}

	std::ofstream file("acceptance_report.txt");
	for (const auto &line : report.lines) {
		file << line << "\n";
	}
	std::cout << (11 - report.failed) << "/11 criteria pass" << std::endl;
	return strict && report.failed > 0 ? 1 : 0;
}
