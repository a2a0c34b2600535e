#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace ssmrpe {

/// Worker count used by data-parallel loops. Resolution order: the
/// process-wide override, then the SSMRPE_THREADS environment variable, then
/// std::thread::hardware_concurrency(). Always >= 1.
std::size_t worker_count();

/// Overrides the worker count for the whole process; nullopt restores the
/// environment/hardware default.
void set_worker_count(std::optional<std::size_t> count);

/// Runs body(i) for i in [0, n) split into contiguous static chunks, one per
/// worker. Each index is visited exactly once; callers write only to
/// index-owned output so results do not depend on the worker count.
/// The first exception thrown by any worker is rethrown after all join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ssmrpe
