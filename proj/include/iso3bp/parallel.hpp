// Worker-pool fan-out for independent integration jobs (table rows, profile
// points). OpenMP-backed when built with it; plain loop otherwise. The
// ISO3BP_THREADS environment variable caps the pool size.
#ifndef ISO3BP_PARALLEL_HPP
#define ISO3BP_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>

namespace iso3bp {

// Pool size: min(ISO3BP_THREADS, available parallelism); at least 1.
int worker_count();

// Runs fn(i) for i in [0, n). Results must be written by index; exceptions
// are captured and the first one rethrown after the loop completes.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn,
                        bool force_serial = false);

} // namespace iso3bp

#endif
