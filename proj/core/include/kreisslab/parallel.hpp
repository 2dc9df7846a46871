#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace kreisslab {

/// Process-wide worker count for parallel_for. 1 disables threading.
/// Falls back to the KREISSLAB_THREADS environment variable.
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [0, n). Work is split into contiguous chunks; callers
/// must write results into per-index slots and reduce sequentially afterwards
/// so that the outcome is independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Pairwise (cascade) summation; deterministic and more accurate than a
/// running sum for long quadrature reductions.
double pairwise_sum(const std::vector<double>& v);

} // namespace kreisslab
