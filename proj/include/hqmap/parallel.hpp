#pragma once

#include <cstddef>
#include <functional>

namespace hqmap {

/// Worker count used by data-parallel loops: hardware concurrency capped by
/// the HQMAP_THREADS environment variable (and by set_thread_cap()).
unsigned thread_count();

/// Overrides the cap; 0 restores the environment/hardware default.
void set_thread_cap(unsigned cap);

/// Runs body(i) for i in [0, n) across thread_count() workers, in contiguous
/// blocks. Callers write results into per-index slots and reduce afterwards,
/// so results never depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hqmap
