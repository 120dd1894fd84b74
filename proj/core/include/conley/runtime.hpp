#pragma once

namespace conley {

/// Worker count for internal parallelism: CONLEY_TRANSIT_THREADS when set
/// and positive, hardware concurrency otherwise, at least one.
int configured_thread_count();

}  // namespace conley
