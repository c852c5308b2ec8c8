#pragma once

#include <exception>
#include <mutex>

namespace waldkit::kernels {

template <class T, class Body>
std::vector<T> map_indexed(std::size_t n, bool parallel, Body body) {
  std::vector<T> out(n);
  if (!parallel) {
    for (std::size_t i = 0; i < n; ++i) out[i] = body(i);
    return out;
  }
  // Exceptions cannot leave an OpenMP region; keep the one with the lowest
  // index so the reported error matches the serial run.
  std::exception_ptr error;
  std::size_t error_index = n;
  std::mutex mu;
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (static_cast<std::size_t>(i) < error_index) {
        error_index = static_cast<std::size_t>(i);
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace waldkit::kernels
