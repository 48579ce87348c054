#pragma once

#include <cstdint>
#include <string_view>

namespace epiforecast {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
	x += 0x9E3779B97F4A7C15ULL;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
	return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view text) {
	std::uint64_t h = 0xCBF29CE484222325ULL;
	for (const char c : text) {
		h ^= static_cast<unsigned char>(c);
		h *= 0x100000001B3ULL;
	}
	return h;
}

/// Independent child seed of `base` for a given salt.
inline constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
	return splitmix64(base ^ splitmix64(salt));
}

} // namespace epiforecast
