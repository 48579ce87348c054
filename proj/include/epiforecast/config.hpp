#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epiforecast::config {

/// Flat `key = value` file. Blank lines and lines starting with '#' are
/// ignored; keys mirror long command-line flags without the leading dashes.
/// Throws FormatError on a line without '=', an empty key or a repeated key.
std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text);

} // namespace epiforecast::config
