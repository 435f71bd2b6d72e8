#pragma once

#include <cstddef>
#include <functional>

namespace stacharge::detail {

// Row bodies must not throw; each writes only its own output slot.
void for_each_row_serial(std::size_t n, const std::function<void(std::size_t)>& body);
void for_each_row_parallel(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace stacharge::detail
