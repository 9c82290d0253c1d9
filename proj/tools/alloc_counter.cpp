#include "alloc_counter.hpp"

#include <gmp.h>

#include <atomic>
#include <cstdlib>
#include <new>

namespace {

std::atomic<std::size_t> g_allocated{0};

// GMP allocates limbs with malloc directly; route it through the counter too.
void* gmp_alloc(std::size_t size) {
  g_allocated.fetch_add(size, std::memory_order_relaxed);
  void* p = std::malloc(size);
  if (!p) std::abort();
  return p;
}

void* gmp_realloc(void* p, std::size_t old_size, std::size_t new_size) {
  if (new_size > old_size) g_allocated.fetch_add(new_size - old_size, std::memory_order_relaxed);
  void* q = std::realloc(p, new_size);
  if (!q) std::abort();
  return q;
}

void gmp_free(void* p, std::size_t) { std::free(p); }

const bool g_gmp_hooked = [] {
  mp_set_memory_functions(gmp_alloc, gmp_realloc, gmp_free);
  return true;
}();

}  // namespace

namespace cospectral::tools {
std::size_t allocated_bytes() noexcept { return g_allocated.load(std::memory_order_relaxed); }
}  // namespace cospectral::tools

void* operator new(std::size_t size) {
  g_allocated.fetch_add(size, std::memory_order_relaxed);
  if (void* p = std::malloc(size == 0 ? 1 : size)) return p;
  throw std::bad_alloc();
}

void* operator new[](std::size_t size) { return ::operator new(size); }

void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }
