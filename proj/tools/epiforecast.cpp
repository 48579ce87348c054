// Command-line front end: ingest, benchmark, forecast, plot.

#include "epiforecast/benchmark.hpp"
#include "epiforecast/config.hpp"
#include "epiforecast/csv.hpp"
#include "epiforecast/ingest.hpp"
#include "epiforecast/plot.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

using namespace epiforecast;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kIo = 2, kData = 3, kModel = 4 };

int exit_code(ErrorKind kind) {
	switch (kind) {
	case ErrorKind::InvalidArgument:
		return kUsage;
	case ErrorKind::IoError:
		return kIo;
	case ErrorKind::FormatError:
	case ErrorKind::CellError:
	case ErrorKind::NotFound:
	case ErrorKind::OutOfRange:
	case ErrorKind::StateMismatch:
	case ErrorKind::EmptyInput:
	case ErrorKind::ShapeError:
	case ErrorKind::ZeroActual:
	case ErrorKind::InvalidInterval:
		return kData;
	default:
		return kModel;
	}
}

/// Model hyperparameters exposed on every subcommand that fits models.
struct ModelFlags {
	std::string arima_order = "auto";
	benchmark::ModelSettings settings;
	std::vector<std::string> holidays;

	void add(CLI::App &app) {
		auto &s = settings;
		app.add_option("--arima-order", arima_order, "ARIMA order p,d,q or 'auto' for AICc search")
		    ->capture_default_str();
		app.add_option("--arima-max-p", s.arima_grid.max_p, "Largest AR order searched")->capture_default_str();
		app.add_option("--arima-max-d", s.arima_grid.max_d, "Largest differencing order searched")->capture_default_str();
		app.add_option("--arima-max-q", s.arima_grid.max_q, "Largest MA order searched")->capture_default_str();
		app.add_option("--arima-min-margin", s.arima.min_sample_margin,
		               "Observations required beyond d + max(p,q)")
		    ->capture_default_str();
		app.add_option("--narnn-lags", s.narnn.lags, "NARNN lag count when lag selection is off")->capture_default_str();
		app.add_option("--narnn-lag-candidates", s.narnn.lag_candidates,
		               "NARNN lag counts tried by validation (empty list disables selection)")
		    ->delimiter(',')
		    ->capture_default_str();
		app.add_option("--narnn-validation-len", s.narnn.validation_len, "Trailing targets used to choose the lag count")
		    ->capture_default_str();
		app.add_option("--narnn-hidden", s.narnn.hidden, "NARNN hidden tanh units")->capture_default_str();
		app.add_option("--narnn-epochs", s.narnn.epochs, "NARNN full-batch Adam epochs")->capture_default_str();
		app.add_option("--narnn-lr", s.narnn.learning_rate, "NARNN learning rate")->capture_default_str();
		app.add_option("--narnn-restarts", s.narnn.restarts, "NARNN restarts; their outputs are averaged")
		    ->capture_default_str();
		app.add_option("--lstm-window", s.lstm.window, "LSTM input window length")->capture_default_str();
		app.add_option("--lstm-hidden", s.lstm.hidden, "LSTM hidden size")->capture_default_str();
		app.add_option("--lstm-epochs", s.lstm.epochs, "LSTM full-batch Adam epochs")->capture_default_str();
		app.add_option("--lstm-lr", s.lstm.learning_rate, "LSTM learning rate")->capture_default_str();
		app.add_option("--hw-season", s.season_length, "Holt-Winters season length in days")->capture_default_str();
		app.add_option("--additive-changepoints", s.additive.n_changepoints, "Additive trend changepoints")
		    ->capture_default_str();
		app.add_option("--additive-changepoint-range", s.additive.changepoint_range,
		               "Fraction of history eligible for changepoints")
		    ->capture_default_str();
		app.add_option("--additive-fourier-order", s.additive.fourier_order, "Weekly Fourier harmonics")
		    ->capture_default_str();
		app.add_option("--additive-lambda-delta", s.additive.lambda_delta, "Ridge penalty on changepoint deltas")
		    ->capture_default_str();
		app.add_option("--additive-lambda-beta", s.additive.lambda_beta, "Ridge penalty on seasonal/holiday terms")
		    ->capture_default_str();
		app.add_option("--additive-holidays", holidays, "Holidays as YYYY-MM-DD:LABEL, comma separated")
		    ->delimiter(',')
		    ->capture_default_str();
	}

	benchmark::ModelSettings resolve() {
		benchmark::ModelSettings out = settings;
		if (arima_order != "auto") {
			out.arima_order = arima::parse_order(arima_order);
		}
		for (const auto &h : holidays) {
			const auto colon = h.find(':');
			if (colon == std::string::npos) {
				throw Error(ErrorKind::InvalidArgument, "holiday '" + h + "' is not YYYY-MM-DD:LABEL");
			}
			out.additive.holidays.push_back({parse_iso_date(h.substr(0, colon)), h.substr(colon + 1)});
		}
		out.additive.validate();
		return out;
	}
};

std::string default_source() { return ingest::resolve_source("", EPIFORECAST_FIXTURE); }

void add_source(CLI::App &app, std::string &source) {
	app.add_option("--source", source,
	               "JHU confirmed-global CSV path or http(s) URL; a bare file name is looked up in $" +
	                   std::string(ingest::kDataDirEnv))
	    ->capture_default_str();
}

/// Applies `key = value` lines to options that were not given on the command line.
void apply_config(CLI::App &app, const std::string &path) {
	if (path.empty()) {
		return;
	}
	for (const auto &[key, value] : config::parse_key_values(csv::read_file(path))) {
		CLI::Option *opt = app.get_option_no_throw("--" + key);
		if (!opt || key == "config") {
			throw Error(ErrorKind::InvalidArgument, "config key '" + key + "' is not an option of '" + app.get_name() + "'");
		}
		if (opt->count() == 0) {
			opt->add_result(value);
			opt->run_callback();
		}
	}
}

ingest::RawCaseTable load_table(const std::string &source) {
	return ingest::parse_jhu_csv(ingest::load_source(ingest::resolve_source(source, EPIFORECAST_FIXTURE)));
}

void write_output(const std::string &path, const std::string &contents) {
	if (path == "-") {
		std::cout << contents;
	} else {
		csv::write_file(path, contents);
	}
}

struct IngestArgs {
	std::string source = default_source();
	std::string country;
	std::string out;
};

int run_ingest(const IngestArgs &a) {
	const TimeSeries series = ingest::aggregate_country(load_table(a.source), a.country);
	std::ostringstream body;
	csv::write_series(body, series);
	write_output(a.out, body.str());
	std::cerr << "wrote " << series.size() << " rows for " << series.name() << ", " << format_iso_date(series.start())
	          << " to " << format_iso_date(series.end()) << '\n';
	for (const Date d : ingest::downward_revisions(series)) {
		std::cerr << "note: cumulative count decreases on " << format_iso_date(d) << " (kept as published)\n";
	}
	return kOk;
}

struct BenchmarkArgs {
	std::string config;
	std::string source = default_source();
	std::vector<std::string> countries;
	std::vector<std::string> intervals;
	std::vector<std::string> models;
	std::uint64_t seed = 42;
	unsigned threads = 0;
	std::string out_dir = "results";
	ModelFlags flags;
};

int run_benchmark(BenchmarkArgs &a) {
	benchmark::BenchmarkSpec spec;
	spec.seed = a.seed;
	spec.threads = a.threads;
	spec.settings = a.flags.resolve();
	if (a.countries.empty() && a.intervals.empty() && a.models.empty()) {
		spec.cells = benchmark::protocol_cells();
	} else {
		std::vector<ingest::IntervalSpec> intervals;
		for (const auto &text : a.intervals) {
			intervals.push_back(ingest::parse_interval(text));
		}
		spec.cells = benchmark::grid_cells(a.countries.empty() ? std::vector<std::string>{"India"} : a.countries,
		                                   intervals.empty() ? ingest::default_intervals() : intervals,
		                                   a.models.empty() ? benchmark::kModelKeys : a.models);
	}

	const ingest::RawCaseTable table = load_table(a.source);
	std::map<std::string, TimeSeries> dataset;
	for (const auto &cell : spec.cells) {
		if (dataset.find(cell.country) == dataset.end()) {
			dataset.emplace(cell.country, ingest::aggregate_country(table, cell.country));
		}
	}
	const benchmark::BenchmarkResult result = benchmark::run_benchmark(dataset, spec);

	namespace fs = std::filesystem;
	const fs::path dir(a.out_dir);
	const std::string text = benchmark::render_text(result.table);
	csv::write_file((dir / "rank.csv").string(), benchmark::rank_csv(result.table));
	csv::write_file((dir / "rank.txt").string(), text);
	csv::write_file((dir / "errors.csv").string(), benchmark::errors_csv(result.table));
	for (const auto &o : result.outcomes) {
		csv::write_file((dir / "forecasts" / benchmark::forecast_file_name(o.cell)).string(), benchmark::forecast_csv(o));
	}
	csv::write_file((dir / "run_metadata.json").string(),
	                benchmark::metadata_json(spec, result, fs::path(a.source).filename().string()));
	std::cout << text;
	std::cerr << result.outcomes.size() << " cells written to " << dir.string() << '\n';
	return kOk;
}

struct ForecastArgs {
	std::string config;
	std::string source = default_source();
	std::string model;
	std::string country;
	int horizon = 10;
	std::uint64_t seed = 42;
	std::string out = "-";
	ModelFlags flags;
};

int run_forecast(ForecastArgs &a) {
	if (a.horizon < 1) {
		throw Error(ErrorKind::InvalidArgument, "--horizon must be >= 1");
	}
	benchmark::check_model_key(a.model);
	const benchmark::ModelSettings settings = a.flags.resolve();
	const TimeSeries series = ingest::from_first_case(ingest::aggregate_country(load_table(a.source), a.country));
	std::string detail;
	const ForecastResult fc = benchmark::fit_and_forecast(a.model, series, a.horizon, settings, a.seed, &detail);
	std::ostringstream body;
	csv::write_row(body, {"date", "point", "lower90", "upper90"});
	for (Eigen::Index k = 0; k < fc.horizon(); ++k) {
		csv::write_row(body, {format_iso_date(fc.date(k)), csv::format_real(fc.point[k]), csv::format_real(fc.lower[k]),
		                      csv::format_real(fc.upper[k])});
	}
	write_output(a.out, body.str());
	std::cerr << detail << " fitted on " << series.size() << " days ending " << format_iso_date(series.end()) << '\n';
	return kOk;
}

struct PlotArgs {
	std::string actuals;
	std::vector<std::string> forecasts;
	std::string band;
	std::string title = "Cumulative confirmed cases";
	int context_days = 30;
	std::string out;
};

int run_plot(const PlotArgs &a) {
	std::vector<plot::Line> lines;
	for (const auto &spec : a.forecasts) {
		const auto eq = spec.find('=');
		const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
		const std::string label =
		    eq == std::string::npos ? std::filesystem::path(path).stem().string() : spec.substr(0, eq);
		lines.push_back(plot::read_forecast_csv(csv::read_file(path), label));
	}
	plot::Line actual = plot::read_actuals_csv(csv::read_file(a.actuals));
	// Keep the actuals from context_days before the first forecast date onward.
	Date first = lines.front().dates.front();
	for (const auto &l : lines) {
		first = std::min(first, l.dates.front());
	}
	const Date from = first - std::chrono::days(a.context_days);
	plot::Line trimmed{actual.label, {}, {}, {}, {}};
	std::vector<double> values;
	for (std::size_t i = 0; i < actual.dates.size(); ++i) {
		if (actual.dates[i] >= from) {
			trimmed.dates.push_back(actual.dates[i]);
			values.push_back(actual.values[Eigen::Index(i)]);
		}
	}
	if (values.empty()) {
		throw Error(ErrorKind::FormatError, "actuals file has no dates inside the plotted range");
	}
	trimmed.values = Eigen::Map<const Eigen::VectorXd>(values.data(), Eigen::Index(values.size()));

	plot::PlotOptions options;
	options.title = a.title;
	options.band = 0;
	if (!a.band.empty()) {
		const auto it = std::find_if(lines.begin(), lines.end(), [&](const plot::Line &l) { return l.label == a.band; });
		if (it == lines.end()) {
			throw Error(ErrorKind::InvalidArgument, "--band '" + a.band + "' does not name a forecast");
		}
		options.band = std::size_t(it - lines.begin());
	}
	csv::write_file(a.out, plot::render_svg(trimmed, lines, options));
	return kOk;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"Epidemic case-count forecasting: ARIMA, ARIMA+NARNN hybrid, Holt-Winters, LSTM, additive"};
	app.require_subcommand(1);
	app.set_help_all_flag("--help-all", "Show help for every subcommand");

	IngestArgs ingest_args;
	auto *ingest_cmd = app.add_subcommand("ingest", "Aggregate one country from the JHU feed into a date,value CSV");
	add_source(*ingest_cmd, ingest_args.source);
	ingest_cmd->add_option("--country", ingest_args.country, "Country/Region name as spelled in the feed")->required();
	ingest_cmd->add_option("--out", ingest_args.out, "Output CSV path, '-' for stdout")->required();

	BenchmarkArgs bench;
	auto *bench_cmd = app.add_subcommand(
	    "benchmark", "Run the interval benchmark. With no --countries/--intervals/--models the default protocol runs: "
	                 "India x 3 intervals x 5 models, plus US and Brazil x 6MAY-15MAY x {arima, hybrid}");
	bench_cmd->add_option("--config", bench.config, "Flat key = value file; command-line flags win");
	add_source(*bench_cmd, bench.source);
	bench_cmd->add_option("--countries", bench.countries, "Countries, comma separated (default India in grid mode)")
	    ->delimiter(',');
	bench_cmd->add_option("--intervals", bench.intervals,
	                      "Test windows [LABEL:]START:END, comma separated (default 6MAY-15MAY, 21JUL-30JUL, 1AUG-10AUG)")
	    ->delimiter(',');
	bench_cmd->add_option("--models", bench.models, "Models: arima, hybrid, holt-winters, lstm, additive (default all)")
	    ->delimiter(',');
	bench_cmd->add_option("--seed", bench.seed, "Global seed; each cell derives its own")->capture_default_str();
	bench_cmd->add_option("--threads", bench.threads, "Worker threads, 0 = all cores (results do not depend on it)")
	    ->capture_default_str();
	bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for tables, forecasts and metadata")
	    ->capture_default_str();
	bench.flags.add(*bench_cmd);

	ForecastArgs fc;
	auto *fc_cmd = app.add_subcommand("forecast", "Fit one model on all available data and forecast future days");
	fc_cmd->add_option("--config", fc.config, "Flat key = value file; command-line flags win");
	add_source(*fc_cmd, fc.source);
	fc_cmd->add_option("--model", fc.model, "arima, hybrid, holt-winters, lstm or additive")->required();
	fc_cmd->add_option("--country", fc.country, "Country/Region name as spelled in the feed")->required();
	fc_cmd->add_option("--horizon", fc.horizon, "Days to forecast")->capture_default_str();
	fc_cmd->add_option("--order", fc.flags.arima_order, "Alias of --arima-order");
	fc_cmd->add_option("--seed", fc.seed, "Seed for the neural models")->capture_default_str();
	fc_cmd->add_option("--out", fc.out, "Output CSV path, '-' for stdout")->capture_default_str();
	fc.flags.add(*fc_cmd);

	PlotArgs pl;
	auto *plot_cmd = app.add_subcommand("plot", "Draw actuals and forecast CSVs into a standalone SVG");
	plot_cmd->add_option("--actuals", pl.actuals, "date,value CSV (as written by ingest)")->required();
	plot_cmd->add_option("--forecast", pl.forecasts, "Forecast CSV as LABEL=PATH or PATH; repeatable")->required();
	plot_cmd->add_option("--band", pl.band, "Label whose 90% band is shaded (default: first forecast)");
	plot_cmd->add_option("--title", pl.title, "Chart title")->capture_default_str();
	plot_cmd->add_option("--context-days", pl.context_days, "Days of actuals shown before the first forecast date")
	    ->capture_default_str();
	plot_cmd->add_option("--out", pl.out, "Output SVG path")->required();

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		return app.exit(e) == 0 ? kOk : kUsage;
	}

	try {
		if (*ingest_cmd) {
			return run_ingest(ingest_args);
		}
		if (*bench_cmd) {
			apply_config(*bench_cmd, bench.config);
			return run_benchmark(bench);
		}
		if (*fc_cmd) {
			apply_config(*fc_cmd, fc.config);
			return run_forecast(fc);
		}
		return run_plot(pl);
	} catch (const CLI::ParseError &e) {
		std::cerr << "error: " << e.what() << '\n';
		return kUsage;
	} catch (const epiforecast::Error &e) {
		std::cerr << "error: " << e.what() << '\n';
		return exit_code(e.kind());
	} catch (const std::exception &e) {
		std::cerr << "error: " << e.what() << '\n';
		return kModel;
	}
}
