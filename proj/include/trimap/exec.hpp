#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

namespace trimap {

/// Execution policy for batch kernels. The serial path is the reference
/// implementation; the parallel path must produce bit-identical results
/// for any thread count (see blocked_accumulate / pairwise_sum).
enum class Exec { Serial, Parallel };

Exec default_exec();
void set_default_exec(Exec mode);

/// Worker-pool cap for the parallel path. n <= 0 restores the hardware default.
void set_max_threads(int n);
int max_threads();

namespace detail {

class ExceptionSlot {
public:
    void capture() {
        if (!armed_.exchange(true, std::memory_order_acq_rel)) {
            std::lock_guard<std::mutex> lock(mutex_);
            error_ = std::current_exception();
        }
    }
    bool armed() const { return armed_.load(std::memory_order_acquire); }
    void rethrow_if_armed() {
        if (armed_.load(std::memory_order_acquire)) {
            std::lock_guard<std::mutex> lock(mutex_);
            std::rethrow_exception(error_);
        }
    }

private:
    std::atomic<bool> armed_{false};
    std::mutex mutex_;
    std::exception_ptr error_;
};

}  // namespace detail

/// Runs fn(i) for i in [0, count). Items must be independent. Exceptions
/// thrown on the parallel path are re-raised after the loop joins (first
/// one wins); remaining items are skipped once a failure is recorded.
template <class Fn>
void for_each_index(std::size_t count, Fn&& fn, Exec mode = default_exec()) {
    if (mode == Exec::Serial || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    detail::ExceptionSlot slot;
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(count); ++i) {
        if (slot.armed()) continue;
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            slot.capture();
        }
    }
    slot.rethrow_if_armed();
}

/// Sum with a fixed pairwise association; the result does not depend on
/// thread count because the tree shape is a function of the length only.
double pairwise_sum(std::span<const double> values);
double pairwise_sum_strided(const double* values, std::size_t count, std::size_t stride);

/// Weighted dot Σ w_i v_i with the same fixed association.
double pairwise_dot(std::span<const double> values, std::span<const double> weights);

namespace detail {
inline constexpr std::size_t kAccumulateBlock = 1024;
}

/// Deterministic blocked reduction for vector-valued per-item terms.
/// fn(i, terms) fills `width` doubles for item i and returns false to mark
/// the item infeasible (the reduction is then abandoned and false returned).
/// Per-block partial sums run in index order; block partials are combined
/// with a pairwise tree, so results are independent of the thread count.
template <class Fn>
bool blocked_accumulate(std::size_t count, std::size_t width, std::span<double> out, Fn&& fn,
                        Exec mode = default_exec()) {
    const std::size_t blocks = (count + detail::kAccumulateBlock - 1) / detail::kAccumulateBlock;
    std::vector<double> partials(blocks * width, 0.0);
    std::atomic<bool> infeasible{false};
    detail::ExceptionSlot slot;

    auto run_block = [&](std::size_t b) {
        if (infeasible.load(std::memory_order_relaxed)) return;
        std::vector<double> terms(width);
        double* acc = partials.data() + b * width;
        const std::size_t lo = b * detail::kAccumulateBlock;
        const std::size_t hi = std::min(count, lo + detail::kAccumulateBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            if (!fn(i, std::span<double>(terms))) {
                infeasible.store(true, std::memory_order_relaxed);
                return;
            }
            for (std::size_t j = 0; j < width; ++j) acc[j] += terms[j];
        }
    };

    if (mode == Exec::Serial || blocks < 2) {
        for (std::size_t b = 0; b < blocks && !infeasible; ++b) run_block(b);
    } else {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(blocks); ++b) {
            if (slot.armed()) continue;
            try {
                run_block(static_cast<std::size_t>(b));
            } catch (...) {
                slot.capture();
            }
        }
        slot.rethrow_if_armed();
    }
    if (infeasible.load()) return false;
    for (std::size_t j = 0; j < width; ++j)
        out[j] = pairwise_sum_strided(partials.data() + j, blocks, width);
    return true;
}

}  // namespace trimap
