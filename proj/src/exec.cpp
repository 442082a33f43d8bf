#include "trimap/exec.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace trimap {

namespace {
std::atomic<Exec> g_default{Exec::Parallel};
}

Exec default_exec() { return g_default.load(std::memory_order_relaxed); }
void set_default_exec(Exec mode) { g_default.store(mode, std::memory_order_relaxed); }

void set_max_threads(int n) {
#ifdef _OPENMP
    if (n > 0)
        omp_set_num_threads(n);
    else
        omp_set_num_threads(omp_get_num_procs());
#else
    (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double pairwise_sum_strided(const double* values, std::size_t count, std::size_t stride) {
    if (count == 0) return 0.0;
    if (count <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += values[i * stride];
        return s;
    }
    const std::size_t half = count / 2;
    return pairwise_sum_strided(values, half, stride) +
           pairwise_sum_strided(values + half * stride, count - half, stride);
}

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_strided(values.data(), values.size(), 1);
}

double pairwise_dot(std::span<const double> values, std::span<const double> weights) {
    const std::size_t n = values.size();
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = values[i] * weights[i];
    return pairwise_sum(terms);
}

}  // namespace trimap
