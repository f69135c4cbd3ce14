#include "frex/grid_eval.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>

#ifdef FREX_HAVE_OPENMP
#include <omp.h>
#endif

namespace frex {

namespace {
int g_thread_cap = 0;  // 0 = runtime default
}

int max_threads() {
#ifdef FREX_HAVE_OPENMP
    const int hw = omp_get_max_threads();
    return g_thread_cap > 0 ? std::min(g_thread_cap, hw) : hw;
#else
    return 1;
#endif
}

void set_threads(int n) { g_thread_cap = n > 0 ? n : 0; }

std::vector<double> eval_grid(std::span<const double> xs,
                              const std::function<double(double)>& fn, Exec exec) {
    if (!fn) throw std::invalid_argument("eval_grid: empty function");
    std::vector<double> out(xs.size());

#ifdef FREX_HAVE_OPENMP
    if (exec == Exec::Parallel && xs.size() > 1) {
        // Each iteration writes only its own slot, so the result is
        // bit-identical to the serial path regardless of thread count or
        // scheduling.  The first exception (if any) is rethrown here.
        std::exception_ptr first_error = nullptr;
        std::atomic<bool> failed{false};
        const auto n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
        for (long i = 0; i < n; ++i) {
            if (failed.load(std::memory_order_relaxed)) continue;
            try {
                out[static_cast<std::size_t>(i)] = fn(xs[static_cast<std::size_t>(i)]);
            } catch (...) {
                bool expected = false;
                if (failed.compare_exchange_strong(expected, true)) {
#pragma omp critical(frex_grid_eval_error)
                    first_error = std::current_exception();
                }
            }
        }
        if (first_error) std::rethrow_exception(first_error);
        return out;
    }
#else
    (void)exec;
#endif

    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
    return out;
}

}  // namespace frex
