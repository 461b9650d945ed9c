#include <atomic>
#include <cstdlib>

#include "fuzzyseg/simd/kernels.hpp"

namespace fuzzyseg::simd {

#if defined(FUZZYSEG_HAVE_AVX2)
namespace detail {
const KernelTable& avx2_table();
}
#endif

const KernelTable* avx2_kernels() {
#if defined(FUZZYSEG_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  if (supported) return &detail::avx2_table();
#endif
  return nullptr;
}

std::vector<const KernelTable*> available_backends() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* t = avx2_kernels()) out.push_back(t);
  return out;
}

std::string to_string(Backend b) {
  return b == Backend::scalar ? "scalar" : "avx2";
}

std::optional<Backend> parse_backend(const std::string& name) {
  if (name == "scalar") return Backend::scalar;
  if (name == "avx2") return Backend::avx2;
  return std::nullopt;
}

namespace {

const KernelTable* detect() {
  if (const char* env = std::getenv("FUZZYSEG_SIMD")) {
    const auto b = parse_backend(env);
    if (b == Backend::scalar) return &scalar_kernels();
    if (b == Backend::avx2 && avx2_kernels()) return avx2_kernels();
  }
  if (const auto* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> table{detect()};
  return table;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool set_active(std::optional<Backend> backend) {
  const KernelTable* table = nullptr;
  if (!backend) {
    table = detect();
  } else if (*backend == Backend::scalar) {
    table = &scalar_kernels();
  } else {
    table = avx2_kernels();
  }
  if (!table) return false;
  slot().store(table, std::memory_order_release);
  return true;
}

}  // namespace fuzzyseg::simd
