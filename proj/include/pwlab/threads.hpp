#pragma once

namespace pwlab {

// Execution policy for the parallel kernels. serial is the reference
// implementation; parallel must match it bitwise, which holds because every
// kernel writes disjoint output slots and reduces serially afterwards.
enum class Exec { serial, parallel };

// Worker count for parallel kernels. PWLAB_THREADS caps it (unset, empty or 0
// means all hardware threads). Resolved once per process.
int worker_count();

} // namespace pwlab
