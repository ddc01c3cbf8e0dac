#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#ifdef QMCF_HAVE_OPENMP
#include <omp.h>
#endif

namespace qmcf {

// Global worker count. 0 means "use all hardware threads". A value of 1
// selects the plain serial loops, which double as the reference
// implementation for the parallel kernels.
int worker_threads();
void set_worker_threads(int n);
int hardware_threads();

// Evaluates fn(i) for i in [0, n) into a result vector. The parallel path
// writes independent slots, so the result is identical to the serial path
// for any thread count.
template <typename T, typename Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<T> out(n);
    const int nt = worker_threads();
#ifdef QMCF_HAVE_OPENMP
    if (nt != 1 && n > 1) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt > 0 ? nt : omp_get_max_threads())
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        return out;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
}

// Fixed-shape pairwise tree sum; the result does not depend on thread count
// because it always runs over a fully materialized array in index order.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    if (v.empty()) return T{};
    if (v.size() <= 8) {
        T s = v[0];
        for (std::size_t i = 1; i < v.size(); ++i) s += v[i];
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v.data(), v.size()));
}

}  // namespace qmcf
