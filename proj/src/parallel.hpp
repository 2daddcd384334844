#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace sartex::detail {

/// Runs fn(i) for i in [0, n) across OpenMP threads. If any call throws, the
/// exception from the lowest index is rethrown after the loop, which is the
/// same exception a sequential loop would surface first.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace sartex::detail
