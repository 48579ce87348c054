#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace epiforecast {

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; callers write results into per-index slots so the
/// outcome does not depend on scheduling. The first exception is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn &&fn) {
	if (threads == 0) {
		threads = std::max(1u, std::thread::hardware_concurrency());
	}
	threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
	if (threads <= 1) {
		for (std::size_t i = 0; i < count; ++i) {
			fn(i);
		}
		return;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr failure;
	std::mutex failure_mutex;
	std::vector<std::thread> pool;
	pool.reserve(threads);
	for (unsigned t = 0; t < threads; ++t) {
		pool.emplace_back([&] {
			for (std::size_t i = next++; i < count; i = next++) {
				try {
					fn(i);
				} catch (...) {
					std::lock_guard lock(failure_mutex);
					if (!failure) {
						failure = std::current_exception();
					}
				}
			}
		});
	}
	for (auto &worker : pool) {
		worker.join();
	}
	if (failure) {
		std::rethrow_exception(failure);
	}
}

} // namespace epiforecast
