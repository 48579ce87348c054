#include "epiforecast/config.hpp"

#include "epiforecast/error.hpp"

#include <algorithm>

namespace epiforecast::config {

namespace {

std::string_view trim(std::string_view s) {
	const auto first = s.find_first_not_of(" \t\r");
	if (first == std::string_view::npos) {
		return {};
	}
	const auto last = s.find_last_not_of(" \t\r");
	return s.substr(first, last - first + 1);
}

} // namespace

std::vector<std::pair<std::string, std::string>> parse_key_values(std::string_view text) {
	std::vector<std::pair<std::string, std::string>> entries;
	std::size_t line_no = 0;
	while (!text.empty()) {
		const auto nl = text.find('\n');
		const std::string_view raw = text.substr(0, nl);
		text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
		++line_no;
		const std::string_view line = trim(raw);
		if (line.empty() || line.front() == '#') {
			continue;
		}
		const auto eq = line.find('=');
		if (eq == std::string_view::npos) {
			throw Error(ErrorKind::FormatError, "config line " + std::to_string(line_no) + " has no '='");
		}
		std::string key(trim(line.substr(0, eq)));
		std::string value(trim(line.substr(eq + 1)));
		if (key.empty()) {
			throw Error(ErrorKind::FormatError, "config line " + std::to_string(line_no) + " has an empty key");
		}
		if (std::any_of(entries.begin(), entries.end(), [&](const auto &e) { return e.first == key; })) {
			throw Error(ErrorKind::FormatError, "config key '" + key + "' is repeated on line " +
			                                        std::to_string(line_no));
		}
		entries.emplace_back(std::move(key), std::move(value));
	}
	return entries;
}

} // namespace epiforecast::config
