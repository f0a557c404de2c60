#pragma once

#include <cstddef>
#include <functional>

namespace msir {

/// Worker count used by parallel_for; defaults to the hardware concurrency.
void set_num_threads(int threads);
int num_threads();

/// Runs body(i) for i in [0, count). Calls made from inside another
/// parallel_for run serially on the calling thread. The first exception (by
/// index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace msir
