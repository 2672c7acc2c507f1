#pragma once

#include <cstddef>
#include <exception>

namespace netiss::detail {

// Runs body(t) for t in [0, n) under OpenMP. Bodies must write only to
// slot t of their outputs. If several iterations throw, the exception of the
// smallest t is rethrown, so failures do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const auto count = static_cast<std::ptrdiff_t>(n);
  std::ptrdiff_t failed_at = count;
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t t = 0; t < count; ++t) {
    try {
      body(static_cast<std::size_t>(t));
    } catch (...) {
#pragma omp critical(netiss_parallel_for_failure)
      if (t < failed_at) {
        failed_at = t;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace netiss::detail
