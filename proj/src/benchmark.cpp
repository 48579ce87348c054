#include "epiforecast/benchmark.hpp"

#include "epiforecast/csv.hpp"
#include "epiforecast/hybrid.hpp"
#include "epiforecast/parallel.hpp"
#include "epiforecast/random.hpp"
#include "serialize_detail.hpp"
#include "epiforecast/smoothing.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <sstream>

namespace epiforecast::benchmark {

std::string model_label(std::string_view key) {
	if (key == "arima") return "ARIMA";
	if (key == "hybrid") return "Hybrid";
	if (key == "holt-winters") return "Holt-Winters";
	if (key == "lstm") return "LSTM";
	if (key == "additive") return "Additive";
	throw Error(ErrorKind::InvalidArgument, "unknown model '" + std::string(key) +
	                                            "'; expected one of arima, hybrid, holt-winters, lstm, additive");
}

void check_model_key(std::string_view key) { (void)model_label(key); }

std::vector<Cell> protocol_cells() {
	const auto intervals = ingest::default_intervals();
	std::vector<Cell> cells = grid_cells({"India"}, intervals, kModelKeys);
	for (const auto &country : {"US", "Brazil"}) {
		for (const auto &model : {"arima", "hybrid"}) {
			cells.push_back({country, intervals.front(), model});
		}
	}
	return cells;
}

std::vector<Cell> grid_cells(const std::vector<std::string> &countries,
                             const std::vector<ingest::IntervalSpec> &intervals,
                             const std::vector<std::string> &models) {
	std::vector<Cell> cells;
	for (const auto &country : countries) {
		for (const auto &interval : intervals) {
			for (const auto &model : models) {
				check_model_key(model);
				cells.push_back({country, interval, model});
			}
		}
	}
	return cells;
}

std::uint64_t cell_seed(std::uint64_t seed, const Cell &cell) {
	return derive_seed(seed, fnv1a(cell.country + '\x1f' + cell.interval.label + '\x1f' + cell.model));
}

ForecastResult fit_and_forecast(const std::string &model, const TimeSeries &train, int h,
                                const ModelSettings &settings, std::uint64_t seed, std::string *detail) {
	std::string info;
	ForecastResult out;
	if (model == "arima" || model == "hybrid") {
		const arima::ArimaOrder order =
		    settings.arima_order ? *settings.arima_order : arima::select_order(train, settings.arima_grid, 1);
		arima::ArimaModel linear = arima::fit(train, order, settings.arima);
		info = "ARIMA" + order.to_string();
		if (model == "arima") {
			out = arima::forecast(linear, h);
		} else {
			neural::NarnnConfig cfg = settings.narnn;
			cfg.seed = seed;
			const hybrid::HybridModel fitted = hybrid::fit_from_linear(std::move(linear), cfg);
			info += "+NARNN(lags=" + std::to_string(fitted.nonlinear.lags()) + ")";
			out = hybrid::forecast(fitted, h);
		}
	} else if (model == "holt-winters") {
		const smoothing::HwModel fitted = smoothing::fit(train, settings.season_length);
		info = fitted.seasonal ? "Holt-Winters(multiplicative)" : "Holt(no seasonality)";
		out = smoothing::forecast(fitted, h);
	} else if (model == "lstm") {
		neural::LstmConfig cfg = settings.lstm;
		cfg.seed = seed;
		out = neural::lstm_forecast(neural::lstm_fit(train, cfg), h);
		info = "LSTM(window=" + std::to_string(cfg.window) + ",hidden=" + std::to_string(cfg.hidden) + ")";
	} else if (model == "additive") {
		out = additive::forecast(additive::fit(train, settings.additive), h);
		info = "Additive(changepoints=" + std::to_string(settings.additive.n_changepoints) + ")";
	} else {
		check_model_key(model);
	}
	if (detail) {
		*detail = std::move(info);
	}
	return out;
}

namespace {

CellOutcome run_cell(const TimeSeries &series, const Cell &cell, const BenchmarkSpec &spec) {
	CellOutcome outcome{cell, {}, TimeSeries(cell.country, cell.interval.start, Eigen::VectorXd::Zero(1)),
	                    std::nullopt, {}, cell_seed(spec.seed, cell), 0};
	outcome.report.country = cell.country;
	outcome.report.interval = cell.interval.label;
	outcome.report.model = model_label(cell.model);
	try {
		const TimeSeries sliced = ingest::slice_for_interval(series, cell.interval);
		auto [train, test] = train_test_split(sliced, SplitSpec{cell.interval.length_days(), cell.interval.end});
		outcome.actual = test;
		outcome.train_len = train.size();
		const ForecastResult fc =
		    fit_and_forecast(cell.model, train, int(test.size()), spec.settings, outcome.seed, &outcome.detail);
		outcome.report.rmse = eval::rmse(test.values(), fc.point);
		outcome.report.mae = eval::mae(test.values(), fc.point);
		outcome.report.mape_pct = eval::mape_pct(test.values(), fc.point);
		outcome.report.coverage90_pct = eval::coverage90_pct(test.values(), fc.lower, fc.upper);
		outcome.forecast = fc;
	} catch (const std::exception &e) {
		outcome.report.error = e.what();
	}
	return outcome;
}

std::string slug(std::string_view text) {
	std::string out;
	for (const char c : text) {
		const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_';
		out += safe ? c : '_';
	}
	return out;
}

std::string metric_or_na(const eval::MetricReport &r, double value) {
	return r.ok() ? csv::format_real(value) : "NA";
}

} // namespace

BenchmarkResult run_benchmark(const std::map<std::string, TimeSeries> &dataset, const BenchmarkSpec &spec) {
	for (const auto &cell : spec.cells) {
		if (dataset.find(cell.country) == dataset.end()) {
			throw Error(ErrorKind::NotFound, "no series loaded for country '" + cell.country + "'");
		}
		check_model_key(cell.model);
	}
	BenchmarkResult result;
	result.outcomes.resize(spec.cells.size(),
	                       CellOutcome{{}, {}, TimeSeries("", Date{}, Eigen::VectorXd::Zero(1)), std::nullopt, {}, 0, 0});
	parallel_for(spec.cells.size(), spec.threads, [&](std::size_t i) {
		const Cell &cell = spec.cells[i];
		result.outcomes[i] = run_cell(dataset.at(cell.country), cell, spec);
	});
	std::vector<eval::MetricReport> reports;
	reports.reserve(result.outcomes.size());
	for (const auto &o : result.outcomes) {
		reports.push_back(o.report);
	}
	result.table = eval::rank(std::move(reports));
	return result;
}

std::string rank_csv(const std::vector<eval::MetricReport> &table) {
	std::ostringstream out;
	csv::write_row(out, {"country", "interval", "model", "rmse", "mae", "mape_pct", "coverage90_pct", "rank"});
	for (const auto &r : table) {
		csv::write_row(out, {r.country, r.interval, r.model, metric_or_na(r, r.rmse), metric_or_na(r, r.mae),
		                     metric_or_na(r, r.mape_pct), metric_or_na(r, r.coverage90_pct),
		                     r.ok() ? std::to_string(r.rank) : "NA"});
	}
	return out.str();
}

std::string errors_csv(const std::vector<eval::MetricReport> &table) {
	std::ostringstream out;
	csv::write_row(out, {"country", "interval", "model", "error"});
	for (const auto &r : table) {
		if (!r.ok()) {
			csv::write_row(out, {r.country, r.interval, r.model, *r.error});
		}
	}
	return out.str();
}

std::string render_text(const std::vector<eval::MetricReport> &table) {
	const std::vector<std::string> header{"country", "interval", "model", "RMSE", "MAE", "MAPE(%)", "cov90(%)", "rank"};
	std::vector<std::vector<std::string>> rows{header};
	auto fixed = [](double v, int digits) {
		std::ostringstream s;
		s << std::fixed << std::setprecision(digits) << v;
		return s.str();
	};
	for (const auto &r : table) {
		if (r.ok()) {
			rows.push_back({r.country, r.interval, r.model, fixed(r.rmse, 2), fixed(r.mae, 2), fixed(r.mape_pct, 3),
			                fixed(r.coverage90_pct, 0), std::to_string(r.rank)});
		} else {
			rows.push_back({r.country, r.interval, r.model, "error: " + *r.error, "", "", "", ""});
		}
	}
	std::vector<std::size_t> width(header.size(), 0);
	for (const auto &row : rows) {
		// Error text spans the metric columns, so it does not widen them.
		const bool error_row = row.size() > 4 && row[4].empty() && row[3].rfind("error: ", 0) == 0;
		for (std::size_t c = 0; c < row.size(); ++c) {
			if (!(error_row && c == 3)) {
				width[c] = std::max(width[c], row[c].size());
			}
		}
	}
	std::ostringstream out;
	for (const auto &row : rows) {
		std::string line;
		for (std::size_t c = 0; c < row.size(); ++c) {
			const bool numeric = c >= 3;
			std::string cell = row[c];
			if (cell.size() < width[c]) {
				const std::string pad(width[c] - cell.size(), ' ');
				cell = numeric && cell.rfind("error: ", 0) != 0 ? pad + cell : cell + pad;
			}
			line += (c ? "  " : "") + cell;
		}
		while (!line.empty() && line.back() == ' ') {
			line.pop_back();
		}
		out << line << '\n';
	}
	return out.str();
}

std::string forecast_csv(const CellOutcome &outcome) {
	std::ostringstream out;
	csv::write_row(out, {"date", "actual", "point", "lower90", "upper90"});
	if (!outcome.forecast) {
		return out.str();
	}
	const ForecastResult &fc = *outcome.forecast;
	for (Eigen::Index k = 0; k < fc.horizon(); ++k) {
		const auto at = outcome.actual.index_of(fc.date(k));
		csv::write_row(out, {format_iso_date(fc.date(k)), at ? csv::format_real(outcome.actual[*at]) : "NA",
		                     csv::format_real(fc.point[k]), csv::format_real(fc.lower[k]),
		                     csv::format_real(fc.upper[k])});
	}
	return out.str();
}

std::string forecast_file_name(const Cell &cell) {
	return "forecast_" + slug(cell.country) + "_" + slug(cell.interval.label) + "_" + slug(cell.model) + ".csv";
}

std::string metadata_json(const BenchmarkSpec &spec, const BenchmarkResult &result, const std::string &source) {
	using nlohmann::ordered_json;
	ordered_json doc;
	doc["source"] = source;
	doc["seed"] = spec.seed;
	doc["horizon_rule"] = "test length equals interval length";
	doc["settings"] = serialize::detail::settings(spec.settings);
	ordered_json cells = ordered_json::array();
	for (const auto &o : result.outcomes) {
		ordered_json c;
		c["country"] = o.cell.country;
		c["interval"] = o.cell.interval.label;
		c["interval_start"] = format_iso_date(o.cell.interval.start);
		c["interval_end"] = format_iso_date(o.cell.interval.end);
		c["model"] = o.cell.model;
		c["seed"] = o.seed;
		c["train_len"] = o.train_len;
		c["fitted"] = o.detail;
		c["error"] = o.report.error ? ordered_json(*o.report.error) : ordered_json(nullptr);
		cells.push_back(std::move(c));
	}
	doc["cells"] = std::move(cells);
	return doc.dump(2) + "\n";
}

} // namespace epiforecast::benchmark
