#pragma once

#include <cstddef>

namespace cospectral::tools {

/// Total bytes requested through global operator new since program start.
/// Only meaningful in binaries that link alloc_counter.cpp.
std::size_t allocated_bytes() noexcept;

}  // namespace cospectral::tools
