#ifndef COMPSUMM_PARALLEL_HPP
#define COMPSUMM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace compsumm {

/// Process-wide worker count used by every parallel loop. 1 means fully
/// sequential execution.
void set_worker_count(int workers);
int worker_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into per-index slots and reduce afterwards in index order,
/// so output never depends on scheduling. Nested calls from inside a worker
/// run sequentially. If any body throws, the exception from the smallest
/// failing index is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace compsumm

#endif  // COMPSUMM_PARALLEL_HPP
