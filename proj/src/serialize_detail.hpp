#pragma once

#include "epiforecast/benchmark.hpp"

#include <json.hpp>

namespace epiforecast::serialize::detail {

using nlohmann::ordered_json;

ordered_json settings(const benchmark::ModelSettings &settings);
ordered_json narnn_config(const neural::NarnnConfig &config);
ordered_json lstm_config(const neural::LstmConfig &config);
ordered_json additive_config(const additive::AdditiveConfig &config);

} // namespace epiforecast::serialize::detail
