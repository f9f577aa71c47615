#pragma once

#include <cstddef>
#include <functional>

namespace symcap {

/// Number of worker threads used by parallel_for (default: hardware concurrency).
void set_thread_count(unsigned threads);
unsigned thread_count();

/// Calls body(begin, end) on disjoint chunks covering [0, count). Chunk
/// boundaries depend only on `count` and `grain`, never on the thread count,
/// so callers writing per-index results get identical output for any worker
/// count. Nested calls run inline.
void parallel_for(std::size_t count, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace symcap
