#include "row_kernels.hpp"

#include <cstdint>

namespace stacharge::detail {

void for_each_row_serial(std::size_t n, const std::function<void(std::size_t)>& body) {
    for (std::size_t i = 0; i < n; ++i) body(i);
}

void for_each_row_parallel(std::size_t n, const std::function<void(std::size_t)>& body) {
    const auto count = static_cast<std::int64_t>(n);
    // Run cost grows with tau_c, so rows are handed out one at a time.
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace stacharge::detail
