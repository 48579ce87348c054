#pragma once

#include "epiforecast/additive.hpp"
#include "epiforecast/arima.hpp"
#include "epiforecast/eval.hpp"
#include "epiforecast/ingest.hpp"
#include "epiforecast/neural.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace epiforecast::benchmark {

/// Model keys accepted on the command line, in display order.
inline const std::vector<std::string> kModelKeys{"arima", "hybrid", "holt-winters", "lstm", "additive"};

/// "arima" -> "ARIMA", "holt-winters" -> "Holt-Winters", ...
std::string model_label(std::string_view key);
/// Throws InvalidArgument for unknown keys.
void check_model_key(std::string_view key);

/// Hyperparameters shared by every cell. Seeds inside the neural configs are
/// replaced by per-cell derived seeds.
struct ModelSettings {
	std::optional<arima::ArimaOrder> arima_order;
	arima::OrderGrid arima_grid;
	arima::FitOptions arima;
	neural::NarnnConfig narnn;
	neural::LstmConfig lstm;
	additive::AdditiveConfig additive;
	int season_length = 7;
};

struct Cell {
	std::string country;
	ingest::IntervalSpec interval;
	std::string model;  ///< model key
};

struct BenchmarkSpec {
	std::vector<Cell> cells;
	std::uint64_t seed = 42;
	/// 0 = one worker per hardware thread.
	unsigned threads = 0;
	ModelSettings settings;
};

/// India x default intervals x all models, plus US and Brazil x first
/// interval x {arima, hybrid}.
std::vector<Cell> protocol_cells();

/// Cartesian product in the given order.
std::vector<Cell> grid_cells(const std::vector<std::string> &countries,
                             const std::vector<ingest::IntervalSpec> &intervals,
                             const std::vector<std::string> &models);

/// Seed of one cell, independent of evaluation order.
std::uint64_t cell_seed(std::uint64_t seed, const Cell &cell);

struct CellOutcome {
	Cell cell;
	eval::MetricReport report;
	/// Test-window actuals; empty when the cell failed before the split.
	TimeSeries actual;
	std::optional<ForecastResult> forecast;
	/// Fitted structure, e.g. "ARIMA(2,1,1)" or "ARIMA(2,1,1)+NARNN(lags=5)".
	std::string detail;
	std::uint64_t seed = 0;
	Eigen::Index train_len = 0;
};

struct BenchmarkResult {
	/// In cell order.
	std::vector<CellOutcome> outcomes;
	/// Ranked reports.
	std::vector<eval::MetricReport> table;
};

/// Fits one model on `train` and forecasts `h` steps. `detail` receives a
/// short description of the fitted structure.
ForecastResult fit_and_forecast(const std::string &model, const TimeSeries &train, int h,
                                const ModelSettings &settings, std::uint64_t seed, std::string *detail = nullptr);

/// Per-cell failures become error cells; only a missing country series is fatal.
BenchmarkResult run_benchmark(const std::map<std::string, TimeSeries> &dataset, const BenchmarkSpec &spec);

/// country,interval,model,rmse,mae,mape_pct,coverage90_pct,rank with NA for error cells.
std::string rank_csv(const std::vector<eval::MetricReport> &table);
/// country,interval,model,error
std::string errors_csv(const std::vector<eval::MetricReport> &table);
/// Aligned plain-text table.
std::string render_text(const std::vector<eval::MetricReport> &table);
/// date,actual,point,lower90,upper90
std::string forecast_csv(const CellOutcome &outcome);
/// forecast_<country>_<interval>_<model>.csv with unsafe characters replaced.
std::string forecast_file_name(const Cell &cell);
/// Settings echo and per-cell details; contains no timestamps.
std::string metadata_json(const BenchmarkSpec &spec, const BenchmarkResult &result, const std::string &source);

} // namespace epiforecast::benchmark
