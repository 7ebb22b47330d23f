#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace nodal {

// Worker count: explicit value if > 0, else NODAL_LAB_THREADS, else hardware.
int resolve_threads(int requested = 0);
void set_default_threads(int n);

// Run body(i) for i in [0, count). Each index is handled exactly once; callers
// store per-index results and reduce in index order, so output never depends
// on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int threads = 0);

// splitmix64-style mix of (seed, index) used for per-trial / per-chunk seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace nodal
