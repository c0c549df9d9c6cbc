#ifndef DGSEM_PARALLEL_HPP
#define DGSEM_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dgsem {

/// Current worker count for parallel_for. Defaults to OMP_NUM_THREADS
/// (or 1 without OpenMP).
int max_threads();

/// Set the worker count (clamped to >= 1).
void set_max_threads(int n);

namespace detail {

// First-failing-iteration exception capture so errors thrown inside a
// parallel region are deterministic: the lowest iteration index wins.
class ExceptionCollector {
public:
  void capture(std::size_t index) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!ptr_ || index < index_) {
      ptr_ = std::current_exception();
      index_ = index;
    }
  }
  bool failed() const { return static_cast<bool>(ptr_); }
  [[noreturn]] void rethrow() const { std::rethrow_exception(ptr_); }

private:
  std::mutex mutex_;
  std::exception_ptr ptr_;
  std::size_t index_ = 0;
};

}  // namespace detail

/// Runs f(i) for i in [0, n). Iterations must write disjoint state; results
/// are then independent of the worker count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
  const int threads = max_threads();
  if (threads > 1 && n > 1) {
    detail::ExceptionCollector errors;
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      try {
        f(static_cast<std::size_t>(i));
      } catch (...) {
        errors.capture(static_cast<std::size_t>(i));
      }
    }
    if (errors.failed()) errors.rethrow();
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) f(i);
}

/// Plain sequential loop; the reference path for the OpenMP kernels.
template <class F>
void serial_for(std::size_t n, F&& f) {
  for (std::size_t i = 0; i < n; ++i) f(i);
}

}  // namespace dgsem

#endif
