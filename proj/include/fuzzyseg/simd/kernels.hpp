#pragma once

// Flat-array arithmetic kernels used by the ADMM inner loops.
//
// Every kernel has a scalar reference version and, on x86-64, an AVX2
// version. Elementwise kernels use only correctly rounded IEEE operations
// (no FMA contraction), so all backends produce bit-identical output.
// Reductions accumulate into four interleaved partial sums (element i goes
// to lane i % 4) combined as (l0 + l1) + (l2 + l3); the scalar reference
// follows the same order, so reductions are bit-identical too.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fuzzyseg::simd {

enum class Backend { scalar, avx2 };

struct KernelTable {
  Backend backend;
  const char* name;

  // out = a - b
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
  // out = a + s * b
  void (*add_scaled)(const double* a, const double* b, double s, double* out,
                     std::size_t n);
  // y += s * (a - b)
  void (*acc_scaled_diff)(double* y, const double* a, const double* b,
                          double s, std::size_t n);
  // out = a * b
  void (*mul)(const double* a, const double* b, double* out, std::size_t n);
  // out += |a - c|
  void (*acc_abs_dev)(const double* a, double c, double* out, std::size_t n);
  // out += (a - c)^2
  void (*acc_sq_dev)(const double* a, double c, double* out, std::size_t n);
  // Isotropic shrinkage of (vx, vy) by tau; the zero vector maps to zero.
  void (*shrink)(const double* vx, const double* vy, double tau, double* ox,
                 double* oy, std::size_t n);

  double (*sum)(const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum_sq)(const double* a, std::size_t n);
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // sum of sqrt(x^2 + y^2)
  double (*sum_norm2)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_kernels();

/// AVX2 table when compiled in and supported by the running CPU.
const KernelTable* avx2_kernels();

/// Every table usable on this machine, scalar first.
std::vector<const KernelTable*> available_backends();

/// The table used by the solvers. Chosen once: FUZZYSEG_SIMD=scalar|avx2
/// forces a backend, otherwise the widest supported one is taken.
const KernelTable& active();

/// Overrides the active table for the rest of the process (or resets to
/// auto-detection with nullopt). Returns false if the backend is unavailable.
bool set_active(std::optional<Backend> backend);

std::string to_string(Backend b);
std::optional<Backend> parse_backend(const std::string& name);

}  // namespace fuzzyseg::simd
