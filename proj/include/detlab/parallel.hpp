#pragma once

#include <cstddef>
#include <exception>
#include <utility>
#include <vector>

namespace detlab {

enum class ExecMode { serial, openmp };

ExecMode default_exec_mode();
void set_default_exec_mode(ExecMode m);
int worker_count();

// Data-parallel kernel used by every trial loop. Slot i is a pure function of
// (inputs, derived seed i), and aggregation happens afterwards in index order,
// so serial and OpenMP modes produce bit-identical results.
template <class R, class F>
std::vector<R> map_indexed(std::size_t n, F&& fn, ExecMode mode) {
    std::vector<R> out(n);
    std::vector<std::exception_ptr> errs(n);
    if (mode == ExecMode::openmp) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
            } catch (...) {
                errs[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

template <class R, class F>
std::vector<R> map_indexed(std::size_t n, F&& fn) {
    return map_indexed<R>(n, std::forward<F>(fn), default_exec_mode());
}

}  // namespace detlab
