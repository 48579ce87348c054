#pragma once

#include "epiforecast/additive.hpp"
#include "epiforecast/arima.hpp"
#include "epiforecast/hybrid.hpp"
#include "epiforecast/neural.hpp"
#include "epiforecast/smoothing.hpp"

#include <string>
#include <string_view>

namespace epiforecast::serialize {

/// JSON documents with a "kind" tag. Reals are written with enough digits to
/// round-trip exactly. Readers throw FormatError on a malformed document.
std::string to_json(const arima::ArimaModel &model);
std::string to_json(const smoothing::HwModel &model);
std::string to_json(const neural::NarnnModel &model);
std::string to_json(const neural::LstmModel &model);
std::string to_json(const additive::AdditiveModel &model);
std::string to_json(const hybrid::HybridModel &model);

arima::ArimaModel arima_from_json(std::string_view text);
smoothing::HwModel holt_winters_from_json(std::string_view text);
neural::NarnnModel narnn_from_json(std::string_view text);
neural::LstmModel lstm_from_json(std::string_view text);
additive::AdditiveModel additive_from_json(std::string_view text);
hybrid::HybridModel hybrid_from_json(std::string_view text);

} // namespace epiforecast::serialize
