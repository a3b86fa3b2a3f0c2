#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace qg {

// Worker count: QG_THREADS if set and positive, otherwise hardware concurrency.
unsigned thread_count();

// Runs body(i) for i in [0, n). Order of side effects is unspecified; callers write
// into per-index slots and reduce afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise (cascade) summation in index order.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace qg
