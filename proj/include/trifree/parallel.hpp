#pragma once

#include <cstddef>
#include <functional>

namespace trifree {

// Worker count: TRIFREE_THREADS wins over set_thread_count, which wins over
// hardware concurrency.
int thread_count();
void set_thread_count(int n);

// Runs body(i) for i in [0, count). Work is handed out in index order; the
// caller is responsible for writing results into per-index slots so the
// outcome does not depend on the number of workers.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace trifree
